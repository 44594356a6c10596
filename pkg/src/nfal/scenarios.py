"""Scenario files: schema, execution, checks, sweeps, artifact manifests.

A scenario file is one reproducible experiment: array builders plus scenes,
a list of requested products, and optional checks whose outcome drives the
exit status. All artifacts are written under one output directory together
with a manifest of content hashes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dfield
from importlib import resources
from pathlib import Path

import numpy as np
import yaml
from scipy import ndimage

from . import analysis, gridio, loci, report, spectrum
from .ambiguity import evaluate_af, measure_peak
from .errors import NfalError, ScenarioError
from .geometry import (
    ArrayGeometry,
    Rect,
    Scene,
    build_circular,
    build_concentric,
    build_linear,
    build_rectangular,
)

OUTPUT_KINDS = (
    "af",
    "afr",
    "resolution",
    "ncz",
    "cae",
    "spectrum-g",
    "spectrum-h",
    "loci",
    "check-prop1",
    "check-prop2",
    "check-prop3",
    "safe-spacing",
)

ENV_OUTPUT_ROOT = "NFAL_OUTPUT_ROOT"


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ScenarioError(msg)


def _known_keys(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    _require(not unknown, f"unknown key(s) {sorted(unknown)} in {where}")


def build_array(spec: dict) -> ArrayGeometry:
    _require(isinstance(spec, dict), "array spec must be a mapping")
    _require("builder" in spec, "array spec needs a 'builder'")
    kind = spec["builder"]
    params = {key: val for key, val in spec.items() if key != "builder"}
    try:
        if kind == "linear":
            _known_keys(spec, {"builder", "n", "aperture", "center", "axis"}, "linear array")
            return build_linear(
                int(params["n"]),
                float(params["aperture"]),
                params.get("center", (0.0, 0.0)),
                params.get("axis", (1.0, 0.0)),
            )
        if kind == "linear_spaced":
            _known_keys(spec, {"builder", "n", "spacing", "center", "axis"}, "linear_spaced array")
            n = int(params["n"])
            return build_linear(
                n,
                (n - 1) * float(params["spacing"]),
                params.get("center", (0.0, 0.0)),
                params.get("axis", (1.0, 0.0)),
            )
        if kind == "rectangular":
            _known_keys(spec, {"builder", "nx", "ny", "Dx", "Dy", "center"}, "rectangular array")
            return build_rectangular(
                int(params["nx"]),
                int(params["ny"]),
                float(params["Dx"]),
                float(params["Dy"]),
                params.get("center", (0.0, 0.0)),
            )
        if kind == "circular":
            _known_keys(
                spec, {"builder", "n_theta", "arc_deg", "radius", "center", "start_angle_deg"},
                "circular array",
            )
            return build_circular(
                int(params["n_theta"]),
                np.radians(float(params.get("arc_deg", 360.0))),
                float(params["radius"]),
                params.get("center", (0.0, 0.0)),
                np.radians(float(params.get("start_angle_deg", 0.0))),
            )
        if kind == "concentric":
            _known_keys(
                spec,
                {"builder", "n_theta", "arc_deg", "r_min", "r_max", "n_r", "center", "start_angle_deg"},
                "concentric array",
            )
            radii = np.linspace(float(params["r_min"]), float(params["r_max"]), int(params["n_r"]))
            return build_concentric(
                int(params["n_theta"]),
                np.radians(float(params.get("arc_deg", 360.0))),
                radii,
                params.get("center", (0.0, 0.0)),
                np.radians(float(params.get("start_angle_deg", 0.0))),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad parameters for {kind!r} array: {exc}") from exc
    raise ScenarioError(f"unknown array builder {kind!r}")


def build_scene(spec: dict) -> Scene:
    _require(isinstance(spec, dict), "scene spec must be a mapping")
    _known_keys(spec, {"source", "region", "grid_shape", "wavelength"}, "scene")
    try:
        return Scene(
            source=np.asarray(spec["source"], dtype=float),
            region=Rect.from_any(spec["region"]),
            grid_shape=tuple(spec.get("grid_shape", (256, 256))),
            wavelength=float(spec.get("wavelength", 1.0)),
        )
    except (KeyError, TypeError, ValueError, NfalError) as exc:
        raise ScenarioError(f"bad scene spec: {exc}") from exc


@dataclass
class Case:
    name: str
    array_spec: dict
    scene_spec: dict | None
    test_point: np.ndarray | None
    array2_spec: dict | None
    spectrum_opts: dict
    checks: list[dict]

    @classmethod
    def parse(cls, raw: dict, index: int) -> "Case":
        _require(isinstance(raw, dict), f"case {index} must be a mapping")
        _known_keys(
            raw,
            {"name", "array", "scene", "test_point", "array2", "spectrum", "checks"},
            f"case {index}",
        )
        name = raw.get("name", f"case{index}")
        _require("array" in raw, f"case {name!r} needs an array")
        spectrum_opts = raw.get("spectrum", {}) or {}
        _known_keys(
            spectrum_opts, {"shape", "threshold", "span", "equalize"}, f"case {name!r} spectrum"
        )
        checks = raw.get("checks", []) or []
        _require(isinstance(checks, list), f"case {name!r} checks must be a list")
        tp = raw.get("test_point")
        return cls(
            name=name,
            array_spec=raw["array"],
            scene_spec=raw.get("scene"),
            test_point=None if tp is None else np.asarray(tp, dtype=float),
            array2_spec=raw.get("array2"),
            spectrum_opts=spectrum_opts,
            checks=checks,
        )


@dataclass
class Scenario:
    name: str
    outputs: list[str]
    cases: list[Case]
    figures: bool = True
    workers: int = 1
    output_dir: str | None = None
    description: str = ""

    @classmethod
    def parse(cls, raw: dict) -> "Scenario":
        _require(isinstance(raw, dict), "scenario must be a mapping")
        _known_keys(
            raw,
            {"name", "description", "outputs", "cases", "figures", "workers", "output_dir"},
            "scenario",
        )
        _require("name" in raw, "scenario needs a name")
        outputs = raw.get("outputs", [])
        _require(
            isinstance(outputs, list) and outputs, "scenario needs a nonempty outputs list"
        )
        for out in outputs:
            _require(out in OUTPUT_KINDS, f"unknown output kind {out!r}")
        raw_cases = raw.get("cases")
        _require(isinstance(raw_cases, list) and raw_cases, "scenario needs cases")
        cases = [Case.parse(c, i) for i, c in enumerate(raw_cases)]
        names = [c.name for c in cases]
        _require(len(set(names)) == len(names), "case names must be unique")
        return cls(
            name=str(raw["name"]),
            outputs=list(outputs),
            cases=cases,
            figures=bool(raw.get("figures", True)),
            workers=int(raw.get("workers", 1)),
            output_dir=raw.get("output_dir"),
            description=str(raw.get("description", "")),
        )


def load_scenario(path: Path) -> Scenario:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from exc
    return Scenario.parse(raw)


def resolve_output_dir(scenario: Scenario, override: str | None) -> Path:
    if override:
        return Path(override)
    root = os.environ.get(ENV_OUTPUT_ROOT)
    if root:
        return Path(root) / scenario.name
    if scenario.output_dir:
        return Path(scenario.output_dir)
    return Path("out") / scenario.name


@dataclass
class CheckResult:
    case: str
    kind: str
    passed: bool
    detail: str


class CaseProducts:
    """Computed products of one case, shared between outputs and checks."""

    def __init__(self, array: ArrayGeometry, scene: Scene | None):
        self.array = array
        self.scene = scene
        self.af_grid = None
        self.afr_region = None
        self.resolution_mask = None
        self.verdicts: dict[str, str] = {}
        self.bandwidth = None


def _peak_components_outside(af_grid, afr_mask, level_db: float) -> int:
    """Connected components of the above-level set not containing the peak
    and reaching outside the aliasing-free mask."""
    db = af_grid.db()
    above = db >= level_db
    labels, count = ndimage.label(above)
    peak_label = labels[np.unravel_index(np.nanargmax(db), db.shape)]
    outside = 0
    for comp in range(1, count + 1):
        if comp == peak_label:
            continue
        sel = labels == comp
        if (~afr_mask.bits[sel]).any():
            outside += 1
    return outside


class ScenarioRunner:
    """Executes one scenario, collecting artifacts and check results."""

    def __init__(self, scenario: Scenario, out_dir: Path):
        self.scenario = scenario
        self.out = Path(out_dir)
        self.artifacts: list[Path] = []
        self.checks: list[CheckResult] = []
        self.products: dict[str, CaseProducts] = {}

    def _write(self, path: Path) -> Path:
        self.artifacts.append(path)
        return path

    def run(self) -> int:
        self.out.mkdir(parents=True, exist_ok=True)
        for case in self.scenario.cases:
            self._run_case(case)
        for case in self.scenario.cases:
            for chk in case.checks:
                self.checks.append(self._evaluate_check(case, chk))
        self._write_check_report()
        gridio.write_manifest(
            self.out / "manifest.json", self.scenario.name, self.artifacts
        )
        return 0 if all(c.passed for c in self.checks) else 1

    # ------------------------------------------------------------------
    def _run_case(self, case: Case) -> None:
        array = build_array(case.array_spec)
        scene = build_scene(case.scene_spec) if case.scene_spec else None
        prod = CaseProducts(array, scene)
        self.products[case.name] = prod
        prefix = self.out / case.name
        prefix.mkdir(parents=True, exist_ok=True)

        for kind in self.scenario.outputs:
            self._emit(kind, case, prod, prefix)

    def _need_scene(self, case: Case, kind: str) -> Scene:
        _require(case.scene_spec is not None, f"output {kind!r} needs a scene in case {case.name!r}")
        return self.products[case.name].scene

    def _emit(self, kind: str, case: Case, prod: CaseProducts, prefix: Path) -> None:
        array = prod.array
        if kind == "af":
            scene = self._need_scene(case, kind)
            prod.af_grid = evaluate_af(array, scene, workers=self.scenario.workers)
            gridio.grid_to_csv(prod.af_grid, self._write(prefix / "af.csv"))
            gridio.grid_to_png16(prod.af_grid, self._write(prefix / "af.png"))
            gridio.png16_colormap_note(self._write(prefix / "af_colormap.csv"))
            if self.scenario.figures:
                report.af_figure(
                    prod.af_grid,
                    self._write(prefix / "af_fig.png"),
                    array=array,
                    afr_mask=prod.afr_region.mask if prod.afr_region else None,
                    title=f"{self.scenario.name}:{case.name}",
                )
        elif kind == "afr":
            scene = self._need_scene(case, kind)
            prod.afr_region = analysis.afr(array, scene)
            mask = prod.afr_region.mask
            gridio.mask_to_csv(mask, self._write(prefix / "afr_mask.csv"))
            gridio.polylines_to_csv(
                mask.boundary, self._write(prefix / "afr_boundary.csv"), "aliasing-free"
            )
            if self.scenario.figures:
                report.mask_figure(
                    mask,
                    self._write(prefix / "afr_fig.png"),
                    array=array,
                    source=scene.source,
                    title=f"aliasing-free region ({case.name})",
                )
        elif kind == "resolution":
            scene = self._need_scene(case, kind)
            prod.bandwidth = analysis.bandwidth(
                array, scene.source, scene.k, frame=analysis.BEAM_ALIGNED
            )
            prod.resolution_mask = analysis.resolution_region(
                array, scene.source, scene.k, region=scene.region, shape=scene.grid_shape
            )
            corners = analysis.resolution_box_corners(array, scene.source, scene.k)
            gridio.polylines_to_csv(
                [corners], self._write(prefix / "resolution_box.csv"), "resolution-cell"
            )
        elif kind == "ncz":
            scene = self._need_scene(case, kind)
            mask = analysis.ncz(
                array,
                scene.source,
                scene.region,
                scene.grid_shape,
                scene.k,
                frame=analysis.BEAM_ALIGNED,
            )
            gridio.mask_to_csv(mask, self._write(prefix / "ncz_mask.csv"))
            gridio.polylines_to_csv(
                mask.boundary, self._write(prefix / "ncz_boundary.csv"), "non-contributive"
            )
            if self.scenario.figures:
                report.mask_figure(
                    mask,
                    self._write(prefix / "ncz_fig.png"),
                    array=array,
                    source=scene.source,
                    title=f"non-contributive zone ({case.name})",
                )
        elif kind == "cae":
            scene = self._need_scene(case, kind)
            if prod.afr_region is None:
                prod.afr_region = analysis.afr(array, scene)
            pts = prod.afr_region.mask.boundary_cell_points()
            rows = []
            for axis in prod.afr_region.axes:
                for entry in analysis.critical_element_table(
                    array, pts, scene.source, scene.k, axis
                ):
                    for idx in entry.indices:
                        rows.append(
                            (entry.point[0], entry.point[1], axis, float(entry.value), int(idx))
                        )
            lines = ["# critical antenna elements over aliasing-free boundary cells"]
            lines.append("x,y,axis,k_value,antenna_index")
            for r in rows:
                lines.append(
                    f"{gridio._fmt(r[0])},{gridio._fmt(r[1])},{r[2]},{gridio._fmt(r[3])},{r[4]}"
                )
            self._write(prefix / "cae.csv").write_text("\n".join(lines) + "\n")
        elif kind in ("spectrum-g", "spectrum-h"):
            scene = self._need_scene(case, kind)
            opts = case.spectrum_opts
            shape = tuple(opts.get("shape", (256, 256)))
            threshold = float(opts.get("threshold", spectrum.DEFAULT_SUPPORT_TAIL))
            equalize = bool(opts.get("equalize", True))
            polar = array.coord_system == "polar"
            if kind == "spectrum-g":
                _require(
                    case.test_point is not None,
                    f"spectrum-g needs a test_point in case {case.name!r}",
                )
                if polar:
                    est = spectrum.spectrum_polar(
                        array, scene.source, scene.k, x_test=case.test_point,
                        shape=shape, threshold=threshold, equalize=equalize,
                    )
                else:
                    est = spectrum.spectrum_g(
                        array, case.test_point, scene.source, scene.k,
                        shape=shape, threshold=threshold, equalize=equalize,
                    )
            else:
                if polar:
                    est = spectrum.spectrum_polar(
                        array, scene.source, scene.k,
                        shape=shape, threshold=threshold, equalize=equalize,
                    )
                else:
                    est = spectrum.spectrum_h(
                        array, scene.source, scene.k,
                        shape=shape, threshold=threshold, equalize=equalize,
                    )
            stem = kind.replace("-", "_")
            gridio.spectrum_to_csv(est, self._write(prefix / f"{stem}.csv"))
            gridio.spectrum_to_png16(est, self._write(prefix / f"{stem}.png"))
            if self.scenario.figures:
                report.spectrum_figure(
                    est,
                    self._write(prefix / f"{stem}_fig.png"),
                    band_lines=est.support_box,
                    title=f"{kind} ({case.name})",
                )
        elif kind == "loci":
            scene = self._need_scene(case, kind)
            _require(
                case.test_point is not None, f"loci needs a test_point in case {case.name!r}"
            )
            self._emit_loci(case, prod, prefix, scene)
        elif kind.startswith("check-prop"):
            wanted = {
                c.get("product", "check-prop2")
                for c in case.checks
                if c.get("kind") == "verdict"
            }
            if case.array2_spec is None or kind not in wanted:
                return  # each case runs only the prop checks its verdicts ask for
            scene = self._need_scene(case, kind)
            other = build_array(case.array2_spec)
            if kind == "check-prop1":
                rep = analysis.check_inclusion(array, other, scene)
                verdict = "holds" if rep.holds else "violated"
                detail = f"violating_cells={rep.violating_cells}"
            elif kind == "check-prop2":
                rep = analysis.check_removal(array, other, scene)
                verdict = rep.predicted
                detail = f"direct={rep.direct} consistent={rep.consistent}"
            else:
                rep = analysis.check_addition(array, other, scene)
                verdict = rep.predicted
                detail = f"direct={rep.direct} consistent={rep.consistent}"
            prod.verdicts[kind] = verdict
            self._write(prefix / f"{kind}.txt").write_text(
                f"{kind} verdict: {verdict}\n{detail}\n"
            )
        elif kind == "safe-spacing":
            if array.coord_system == "polar":
                r_max = float(np.linalg.norm(array.elements - array.center, axis=1).max())
                bound = analysis.safe_spacing("circular", r_max)
                text = f"circular radius {gridio._fmt(r_max)}: d_theta <= {gridio._fmt(bound)} rad\n"
            else:
                bound = analysis.safe_spacing("cartesian")
                text = f"cartesian: spacing <= {gridio._fmt(bound)} wavelengths per axis\n"
            self._write(prefix / "safe_spacing.txt").write_text(text)

    def _emit_loci(self, case: Case, prod: CaseProducts, prefix: Path, scene: Scene) -> None:
        array = prod.array
        if array.coord_system == "polar":
            r, theta = array.polar_elements()
            curve = loci.ArcCurve(
                array.center, float(r.max()), float(theta.min()), float(theta.max())
            )
            axis = "theta"
        else:
            lo = array.elements[0]
            hi = array.elements[-1]
            direction = hi - lo
            curve = loci.SegmentCurve(lo - direction, hi + direction)
            axis = "x" if abs(direction[0]) >= abs(direction[1]) else "y"
        result = loci.exact_loci(
            case.test_point, scene.source, curve, scene.k, axis=axis, origin=array.center
        )
        gridio.polylines_to_csv(
            [result.points] if len(result.points) else [],
            self._write(prefix / "loci_roots.csv"),
            "critical-frequency extrema",
        )
        if array.coord_system != "polar":
            try:
                co = loci.hyperbola_coefficients(case.test_point, scene.source)
                l1, l2 = loci.asymptotes(co)
                xs = np.linspace(scene.region.xmin, scene.region.xmax, 64)
                gridio.polylines_to_csv(
                    [l1.scene_points(scene.source[1], xs), l2.scene_points(scene.source[1], xs)],
                    self._write(prefix / "loci_asymptotes.csv"),
                    "asymptotes",
                )
            except NfalError:
                pass

    # ------------------------------------------------------------------
    def _evaluate_check(self, case: Case, chk: dict) -> CheckResult:
        _require(isinstance(chk, dict) and "kind" in chk, f"bad check in case {case.name!r}")
        kind = chk["kind"]
        prod = self.products[case.name]
        try:
            if kind == "afr-covers-region":
                _require(prod.afr_region is not None, "check needs the afr output")
                ok = bool(prod.afr_region.mask.bits.all())
                return CheckResult(case.name, kind, ok, f"true_cells={int(prod.afr_region.mask.bits.sum())}")
            if kind == "afr-has-false-cell":
                _require(prod.afr_region is not None, "check needs the afr output")
                false_cells = int((~prod.afr_region.mask.bits).sum())
                return CheckResult(case.name, kind, false_cells > 0, f"false_cells={false_cells}")
            if kind == "verdict":
                product = chk.get("product", "check-prop2")
                expect = chk["expect"]
                got = prod.verdicts.get(product)
                return CheckResult(
                    case.name, kind, got == expect, f"product={product} got={got} expect={expect}"
                )
            if kind == "masks-equal":
                other = self.products[chk["other_case"]]
                _require(
                    prod.afr_region is not None and other.afr_region is not None,
                    "check needs afr outputs on both cases",
                )
                a, b = prod.afr_region.mask, other.afr_region.mask
                ok = not a.differs_beyond_one_cell(b)
                return CheckResult(
                    case.name, kind, ok,
                    f"other={chk['other_case']} differing_cells={int((a.bits ^ b.bits).sum())}",
                )
            if kind == "resolution-equal":
                other = self.products[chk["other_case"]]
                _require(
                    prod.bandwidth is not None and other.bandwidth is not None,
                    "check needs the resolution output on both cases",
                )
                rtol = float(chk.get("rtol", 1e-3))
                ok = bool(
                    np.allclose(prod.bandwidth.resolution, other.bandwidth.resolution, rtol=rtol)
                )
                return CheckResult(
                    case.name, kind, ok,
                    f"res={np.round(prod.bandwidth.resolution, 6).tolist()} "
                    f"other={np.round(other.bandwidth.resolution, 6).tolist()}",
                )
            if kind == "peak-components":
                _require(
                    prod.af_grid is not None and prod.afr_region is not None,
                    "check needs af and afr outputs",
                )
                level = float(chk.get("level_db", -6.0))
                outside = _peak_components_outside(prod.af_grid, prod.afr_region.mask, level)
                lo = chk.get("min_outside_afr")
                hi = chk.get("max_outside_afr")
                ok = (lo is None or outside >= int(lo)) and (hi is None or outside <= int(hi))
                return CheckResult(case.name, kind, ok, f"outside_components={outside}")
            raise ScenarioError(f"unknown check kind {kind!r}")
        except ScenarioError:
            raise
        except (KeyError, NfalError) as exc:
            raise ScenarioError(f"check {kind!r} in case {case.name!r}: {exc}") from exc

    def _write_check_report(self) -> None:
        lines = []
        for c in self.checks:
            lines.append(
                f"{'PASS' if c.passed else 'FAIL'} {c.case}:{c.kind} {c.detail}"
            )
        text = "\n".join(lines) + ("\n" if lines else "")
        path = self.out / "checks.txt"
        path.write_text(text)
        self.artifacts.append(path)


def run_scenario(
    path: Path, out_override: str | None = None, workers: int | None = None
) -> int:
    scenario = load_scenario(path)
    if workers is not None:
        scenario.workers = int(workers)
    out_dir = resolve_output_dir(scenario, out_override)
    return ScenarioRunner(scenario, out_dir).run()


# ---------------------------------------------------------------------------
# sweeps


TRENDS = ("increasing", "decreasing", "non-increasing", "non-decreasing", "constant")


@dataclass
class SweepSpec:
    name: str
    base: Case
    parameter: str
    values: list[float]
    expect: dict[str, dict]
    figures: bool = True
    output_dir: str | None = None

    @classmethod
    def parse(cls, raw: dict) -> "SweepSpec":
        _require(isinstance(raw, dict), "sweep file must be a mapping")
        _known_keys(
            raw, {"name", "description", "base", "sweep", "expect", "figures", "output_dir"},
            "sweep scenario",
        )
        _require("name" in raw and "base" in raw and "sweep" in raw, "sweep needs name/base/sweep")
        sweep = raw["sweep"]
        _known_keys(sweep, {"parameter", "values"}, "sweep block")
        _require(
            isinstance(sweep.get("parameter"), str),
            "sweep block needs exactly one 'parameter' path",
        )
        values = sweep.get("values")
        _require(isinstance(values, list) and len(values) >= 2, "sweep needs >= 2 values")
        expect = raw.get("expect", {}) or {}
        for metric, rule in expect.items():
            _require(isinstance(rule, dict) and "trend" in rule, f"expect.{metric} needs a trend")
            _require(rule["trend"] in TRENDS, f"unknown trend {rule['trend']!r}")
        return cls(
            name=str(raw["name"]),
            base=Case.parse(raw["base"], 0),
            parameter=sweep["parameter"],
            values=list(values),
            expect=expect,
            figures=bool(raw.get("figures", True)),
            output_dir=raw.get("output_dir"),
        )


def _set_path(mapping: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = mapping
    for key in keys[:-1]:
        if isinstance(node, list):
            node = node[int(key)]
        else:
            _require(key in node, f"sweep parameter path {dotted!r} not found")
            node = node[key]
    last = keys[-1]
    if isinstance(node, list):
        node[int(last)] = value
    else:
        _require(last in node, f"sweep parameter path {dotted!r} not found")
        node[last] = value


def _check_trend(values: list[float], trend: str, rtol: float) -> bool:
    arr = np.asarray(values, dtype=float)
    scale = max(np.abs(arr).max(), 1e-300)
    tol = rtol * scale
    d = np.diff(arr)
    if trend == "increasing":
        return bool(np.all(d > tol))
    if trend == "decreasing":
        return bool(np.all(d < -tol))
    if trend == "non-increasing":
        return bool(np.all(d <= tol))
    if trend == "non-decreasing":
        return bool(np.all(d >= -tol))
    return bool(np.all(np.abs(arr - arr[0]) <= tol))


def run_sweep(path: Path, out_override: str | None = None) -> int:
    import copy

    raw = yaml.safe_load(Path(path).read_text())
    spec = SweepSpec.parse(raw)
    out_dir = resolve_output_dir(
        Scenario(spec.name, ["afr"], [spec.base], output_dir=spec.output_dir), out_override
    )
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for value in spec.values:
        case_raw = {
            "name": "base",
            "array": copy.deepcopy(spec.base.array_spec),
            "scene": copy.deepcopy(spec.base.scene_spec),
        }
        _set_path(case_raw, spec.parameter, value)
        array = build_array(case_raw["array"])
        scene = build_scene(case_raw["scene"])
        region = analysis.afr(array, scene)
        rep = analysis.bandwidth(array, scene.source, scene.k, frame=analysis.BEAM_ALIGNED)
        boundary_pts = region.mask.boundary_cell_points()
        if len(boundary_pts):
            k_max = 0.0
            for axis in region.axes:
                comps = analysis.matched_frequency_components(
                    array, boundary_pts, scene.source, scene.k, axis
                )
                k_max = max(k_max, float(np.nanmax(np.abs(comps))))
        else:
            k_max = float("nan")
        rows.append(
            {
                "value": float(value),
                "afr_area": region.mask.area(),
                "delta_parallel": float(rep.resolution[0]),
                "delta_transverse": float(rep.resolution[1]),
                "k_max_boundary": k_max,
            }
        )

    columns = ["value", "afr_area", "delta_parallel", "delta_transverse", "k_max_boundary"]
    csv_rows = [[row[c] for c in columns] for row in rows]
    table_path = out_dir / "sweep.csv"
    table_path.write_bytes(
        gridio._rows_to_csv([f"swept parameter: {spec.parameter}"], columns, csv_rows)
    )
    artifacts = [table_path]

    failures = []
    verdicts = []
    for metric, rule in spec.expect.items():
        _require(metric in columns[1:], f"unknown sweep metric {metric!r}")
        series = [row[metric] for row in rows]
        rtol = float(rule.get("rtol", 1e-6))
        ok = _check_trend(series, rule["trend"], rtol)
        if rule.get("plateau"):
            scale = max(abs(v) for v in series) or 1.0
            has_plateau = any(
                abs(a - b) <= rtol * scale for a, b in zip(series, series[1:])
            )
            ok = ok and has_plateau
        verdicts.append(
            f"{'PASS' if ok else 'FAIL'} {metric} {rule['trend']}"
            f"{' +plateau' if rule.get('plateau') else ''}: {[round(v, 6) for v in series]}"
        )
        if not ok:
            failures.append(metric)
    report_path = out_dir / "sweep_checks.txt"
    report_path.write_text("\n".join(verdicts) + ("\n" if verdicts else ""))
    artifacts.append(report_path)

    if spec.figures:
        fig_path = out_dir / "sweep_fig.png"
        report.sweep_figure(
            fig_path,
            [row["value"] for row in rows],
            {
                "afr_area": [row["afr_area"] for row in rows],
                "delta_parallel": [row["delta_parallel"] for row in rows],
                "delta_transverse": [row["delta_transverse"] for row in rows],
            },
            xlabel=spec.parameter,
            title=spec.name,
        )
        artifacts.append(fig_path)

    gridio.write_manifest(out_dir / "manifest.json", spec.name, artifacts)
    return 0 if not failures else 1


def bundled_scenarios() -> list[str]:
    """Names of scenario files shipped inside the package."""
    pkg = resources.files("nfal") / "scenarios"
    return sorted(p.name for p in pkg.iterdir() if p.name.endswith(".yaml"))


def bundled_scenario_path(name: str) -> Path:
    pkg = resources.files("nfal") / "scenarios"
    path = pkg / name
    if not path.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return Path(str(path))
