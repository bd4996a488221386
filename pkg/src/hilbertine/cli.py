"""Experiment driver.

Every subcommand reads one JSON config (with a mandatory "version": 1 field;
unknown fields are rejected), writes report files into --out, and prints a
one-line summary. Outputs are deterministic: rerunning the same config on the
same build produces byte-identical files.

Exit codes: 0 success, 2 config / input error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .busemann import (PolygonRegion, TriangleRegion, TruncatedPic,
                       ideal_triangle_area, pic_volume_profile, region_volume)
from .cones import cone_from_domain, dirichlet_lee_domain
from .domains import domain_from_dict, dual_domain, simplex_domain
from .dynamics import ProjTransform, classify
from .errors import (ConfigError, HilbertineError, NonConvergent,
                     NonIntegrable, NotConvexCompatible)
from .groups import GroupPresentation, enumerate_words, limit_set_approx
from .projective import ProjPoint
from .svg import SvgCanvas, domain_outline_xy

CONFIG_VERSION = 1

NUMERICAL_ERRORS = (NonConvergent, NonIntegrable)


# ---------------------------------------------------------------------------
# config plumbing


def _load_config(path: str, required: set, optional: set = frozenset()) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError("cannot read config: %s" % e)
    except json.JSONDecodeError as e:
        raise ConfigError("config is not valid JSON: %s" % e)
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    if cfg.get("version") != CONFIG_VERSION:
        raise ConfigError("config must declare \"version\": %d" % CONFIG_VERSION)
    allowed = {"version"} | required | optional
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise ConfigError("unknown config fields: %s" % ", ".join(unknown))
    missing = sorted(required - set(cfg))
    if missing:
        raise ConfigError("missing config fields: %s" % ", ".join(missing))
    return cfg


def _cfg_domain(cfg: dict):
    d = cfg.get("domain")
    if not isinstance(d, dict):
        raise ConfigError("\"domain\" must be an object")
    try:
        return domain_from_dict(d)
    except HilbertineError as e:
        raise ConfigError("bad domain: %s" % e)


def _cfg_matrix(obj, what: str = "matrix") -> ProjTransform:
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("%s must be 9 numbers" % what)
    if a.size != 9:
        raise ConfigError("%s must be 9 numbers" % what)
    try:
        return ProjTransform(a.reshape(3, 3))
    except HilbertineError as e:
        raise ConfigError("bad %s: %s" % (what, e))


def _cfg_xy(obj, what: str) -> np.ndarray:
    a = np.asarray(obj, dtype=float)
    if a.shape != (2,):
        raise ConfigError("%s must be a pair [x, y]" % what)
    return a


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _write_json(out_dir: str, name: str, obj) -> str:
    return _write(out_dir, name, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _deep_float(obj):
    if isinstance(obj, dict):
        return {k: _deep_float(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_deep_float(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_deep_float(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    return obj


# ---------------------------------------------------------------------------
# geometry helpers for figures


def _clip_halfplane(poly: np.ndarray, fun: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon against fun . (x, y, 1) >= 0."""
    if len(poly) == 0:
        return poly
    vals = poly @ fun[:2] + fun[2]
    out = []
    n = len(poly)
    for i in range(n):
        j = (i + 1) % n
        a, b = poly[i], poly[j]
        fa, fb = vals[i], vals[j]
        if fa >= 0:
            out.append(a)
            if fb < 0:
                t = fa / (fa - fb)
                out.append(a + t * (b - a))
        elif fb >= 0:
            t = fa / (fa - fb)
            out.append(a + t * (b - a))
    return np.asarray(out) if out else np.zeros((0, 2))


def _line_in_bbox(fun: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    """Segment of the line fun . (x, y, 1) = 0 inside a bounding box."""
    a, b, c = fun
    pts = []
    if abs(b) > 1e-14:
        for x in (lo[0], hi[0]):
            y = -(a * x + c) / b
            if lo[1] - 1e-9 <= y <= hi[1] + 1e-9:
                pts.append((x, y))
    if abs(a) > 1e-14:
        for y in (lo[1], hi[1]):
            x = -(b * y + c) / a
            if lo[0] - 1e-9 <= x <= hi[0] + 1e-9:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    arr = np.asarray(pts)
    # farthest pair, robust to duplicate corner hits
    d = ((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    if d[i, j] < 1e-18:
        return None
    return arr[[i, j]]


def _map_polygon(g: ProjTransform, poly: np.ndarray, chart) -> np.ndarray | None:
    h = np.column_stack([poly, np.ones(len(poly))])
    v = h @ chart.basis.T @ g.m.T @ chart.inv.T
    z = v[:, 2]
    if np.any(np.abs(z) <= 1e-12 * np.abs(v).max()):
        return None
    return v[:, :2] / z[:, None]


def _group_from_cfg(cfg: dict, domain):
    mats = cfg.get("generators")
    if not isinstance(mats, list) or not mats:
        raise ConfigError("\"generators\" must be a nonempty list of matrices")
    gens = [_cfg_matrix(m, "generator %d" % i) for i, m in enumerate(mats)]
    labels = cfg.get("labels")
    if labels is not None:
        if (not isinstance(labels, list) or len(labels) != len(gens)
                or not all(isinstance(s, str) for s in labels)):
            raise ConfigError("\"labels\" must name each generator")
    try:
        return GroupPresentation(gens, labels=labels, domain=domain)
    except HilbertineError as e:
        raise ConfigError("bad group: %s" % e)


def _int_field(cfg: dict, name: str, lo: int, hi: int) -> int:
    v = cfg.get(name)
    if not isinstance(v, int) or isinstance(v, bool) or not lo <= v <= hi:
        raise ConfigError("\"%s\" must be an integer in [%d, %d]" % (name, lo, hi))
    return v


# ---------------------------------------------------------------------------
# subcommands


def _run_distance(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    domain = _cfg_domain(cfg)
    x = _cfg_xy(cfg["x"], "x")
    y = _cfg_xy(cfg["y"], "y")
    kw = {} if tol is None else {"tol": tol}
    px = domain.chart.point_from_xy(x[0], x[1])
    py = domain.chart.point_from_xy(y[0], y[1])
    d = domain.hilbert_distance(px, py, **kw)
    report = _deep_float({"distance": d, "x": list(x), "y": list(y), "seed": seed})
    _write_json(out, "distance.json", report)
    return "distance %.12g" % d


def _run_classify(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    g = _cfg_matrix(cfg["matrix"])
    kw = {} if tol is None else {"tol": tol}
    try:
        cls = classify(g, **kw)
        report = _deep_float(cls.to_dict())
        family = report["family"]
    except NotConvexCompatible as e:
        family = "NotConvexCompatible"
        report = {"family": family, "detail": str(e)}
    report["seed"] = seed
    _write_json(out, "classify.json", report)
    return "family %s" % family


def _cfg_region(cfg: dict, domain):
    r = cfg.get("region")
    if not isinstance(r, dict):
        raise ConfigError("\"region\" must be an object")
    kind = r.get("type")
    fields = {
        "polygon": {"type", "vertices"},
        "pic": {"type", "vertices"},
        "truncated_pic": {"type", "vertices", "eps"},
    }
    if kind not in fields:
        raise ConfigError("region type must be polygon, pic or truncated_pic")
    unknown = sorted(set(r) - fields[kind])
    if unknown:
        raise ConfigError("unknown region fields: %s" % ", ".join(unknown))
    verts = r.get("vertices")
    if not isinstance(verts, list) or len(verts) < 3:
        raise ConfigError("region needs at least 3 vertices")
    pts = [domain.chart.point_from_xy(*_cfg_xy(v, "region vertex")) for v in verts]
    if kind == "polygon":
        return PolygonRegion(pts)
    if len(pts) != 3:
        raise ConfigError("a pic has exactly 3 vertices")
    tri = TriangleRegion(*pts)
    if kind == "pic":
        return tri
    eps = r.get("eps")
    if not isinstance(eps, (int, float)) or not 0 < float(eps) < 1e6:
        raise ConfigError("\"eps\" must be a positive number")
    return TruncatedPic(tri, float(eps))


def _run_volume(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    domain = _cfg_domain(cfg)
    region = _cfg_region(cfg, domain)
    rel_tol = cfg.get("rel_tol", 1e-3)
    if not isinstance(rel_tol, (int, float)) or not 0 < rel_tol < 1:
        raise ConfigError("\"rel_tol\" must be in (0, 1)")
    if isinstance(region, TriangleRegion):
        profile = pic_volume_profile(domain, region, rel_tol=float(rel_tol))
        report = {
            "region": cfg["region"],
            "levels": list(profile.eps_levels),
            "partials": list(profile.partials),
            "increments": list(profile.increments),
            "verdict": profile.verdict.value,
            "seed": seed,
        }
        _write_json(out, "volume.json", _deep_float(report))
        return "verdict %s" % profile.verdict.value
    v = region_volume(domain, region, rel_tol=float(rel_tol))
    report = {"region": cfg["region"], "volume": v, "seed": seed}
    _write_json(out, "volume.json", _deep_float(report))
    return "volume %.12g" % v


def _run_dual(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    domain = _cfg_domain(cfg)
    dual = dual_domain(domain)
    report = {"domain": domain.to_dict(), "dual": dual.to_dict(), "seed": seed}
    _write_json(out, "dual.json", _deep_float(report))
    canvas = SvgCanvas()
    canvas.add_path(domain_outline_xy(dual, 256), "domain")
    _write(out, "dual.svg", canvas.render())
    return "dual %s" % dual.to_dict()["type"]


def _run_limit_set(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    domain = _cfg_domain(cfg) if "domain" in cfg else None
    group = _group_from_cfg(cfg, domain)
    max_len = _int_field(cfg, "max_word_len", 1, 12)
    cloud = limit_set_approx(group, max_len)
    chart = domain.chart if domain is not None else None
    pts_xy = []
    for p in cloud.points:
        v = p.v if chart is None else chart.inv @ p.v
        if abs(v[2]) > 1e-9 * np.abs(v).max():
            pts_xy.append([v[0] / v[2], v[1] / v[2]])
    report = {
        "n_points": len(cloud.points),
        "max_word_len": max_len,
        "points": sorted(pts_xy),
        "seed": seed,
    }
    _write_json(out, "limit_set.json", _deep_float(report))
    canvas = SvgCanvas()
    if domain is not None:
        canvas.add_path(domain_outline_xy(domain, 256), "domain")
    if pts_xy:
        arr = np.asarray(sorted(pts_xy))
        span = max(arr.max(axis=0) - arr.min(axis=0)) if len(arr) > 1 else 1.0
        r = max(0.004 * span, 1e-6)
        for p in arr:
            canvas.add_circle(p, r, "cloud", filled=True)
        _write(out, "limit_set.svg", canvas.render())
    return "limit-set points %d" % len(cloud.points)


def _tiling(cfg: dict, out: str, seed: int, stem: str) -> str:
    domain = _cfg_domain(cfg)
    group = _group_from_cfg(cfg, domain)
    max_len = _int_field(cfg, "max_word_len", 1, 10)
    base = _cfg_xy(cfg["base_point"], "base_point")
    cone = cone_from_domain(domain)
    words = enumerate_words(group, max_len)
    base_lift = domain.chart.basis @ np.array([base[0], base[1], 1.0])
    try:
        dd = dirichlet_lee_domain(cone, words, base_lift, domain=domain)
    except HilbertineError as e:
        raise ConfigError("bad base point: %s" % e)

    outline = domain_outline_xy(domain, 256)
    lo, hi = outline.min(axis=0), outline.max(axis=0)

    # fundamental polygon: clip the domain outline by every bisector halfplane
    fund = outline.copy()
    base_h = np.array([base[0], base[1], 1.0])
    for w in dd.functionals:
        fun = domain.chart.basis.T @ w
        if fun @ base_h < 0:
            fun = -fun
        fund = _clip_halfplane(fund, fun)
        if len(fund) == 0:
            break

    canvas = SvgCanvas()
    canvas.add_path(outline, "domain")
    for w in dd.functionals:
        seg = _line_in_bbox(domain.chart.basis.T @ w, lo, hi)
        if seg is not None:
            canvas.add_polyline(seg, "bisector")
    tiles = 0
    if len(fund) >= 3:
        canvas.add_polyline(fund, "region", closed=True)
        for g in words:
            img = _map_polygon(g, fund, domain.chart)
            if img is not None and len(img) >= 3:
                canvas.add_polyline(img, "tile", closed=True)
                tiles += 1
    canvas.add_circle(base, 0.01 * float(max(hi - lo)), "seed")
    _write(out, stem + ".svg", canvas.render())

    report = {
        "n_elements": len(words),
        "n_translates_drawn": tiles,
        "base_point": list(base),
        "dirichlet": dd.to_dict(),
        "seed": seed,
    }
    _write_json(out, stem + ".json", _deep_float(report))
    return "tiling elements %d" % len(words)


def _run_tile(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    return _tiling(cfg, out, seed, "tile")


def _run_dirichlet_tiling(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    return _tiling(cfg, out, seed, "dirichlet_tiling")


def _run_ideal_triangle_scan(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    xs = cfg.get("xs", [0.25, 0.5, 1.0, 2.0, 4.0])
    if (not isinstance(xs, list) or not xs
            or not all(isinstance(v, (int, float)) and v > 0 for v in xs)):
        raise ConfigError("\"xs\" must be a list of positive numbers")
    rel_tol = cfg.get("rel_tol", 1e-3)
    if not isinstance(rel_tol, (int, float)) or not 0 < rel_tol < 1:
        raise ConfigError("\"rel_tol\" must be in (0, 1)")
    domain = simplex_domain()
    s1 = ProjPoint((1.0, 1.0, 0.0))
    s2 = ProjPoint((0.0, 1.0, 1.0))
    rows = []
    for x in xs:
        s3 = ProjPoint((float(x), 0.0, 1.0))
        area = ideal_triangle_area(domain, s1, s2, s3, rel_tol=float(rel_tol))
        rows.append({"x": float(x), "area": area})
    best = min(rows, key=lambda r: r["area"])
    report = {
        "table": rows,
        "argmin_x": best["x"],
        "min_area": best["area"],
        "seed": seed,
    }
    _write_json(out, "ideal_triangle_scan.json", _deep_float(report))
    return "min area %.6f at x=%g" % (best["area"], best["x"])


def _run_cusp_profile(cfg: dict, out: str, seed: int, tol: float | None) -> str:
    domain = _cfg_domain(cfg)
    verts = cfg.get("pic")
    if not isinstance(verts, list) or len(verts) != 3:
        raise ConfigError("\"pic\" must list 3 vertices")
    pts = [domain.chart.point_from_xy(*_cfg_xy(v, "pic vertex")) for v in verts]
    pic = TriangleRegion(*pts)
    levels = cfg.get("eps_levels")
    if levels is not None:
        if (not isinstance(levels, list) or len(levels) < 4
                or not all(isinstance(v, (int, float)) and v > 0 for v in levels)):
            raise ConfigError("\"eps_levels\" must list at least 4 positive radii")
        levels = [float(v) for v in levels]
    rel_tol = cfg.get("rel_tol", 1e-3)
    conv_tol = cfg.get("conv_tol", 1e-3)
    for nm, v in (("rel_tol", rel_tol), ("conv_tol", conv_tol)):
        if not isinstance(v, (int, float)) or not 0 < v < 1:
            raise ConfigError("\"%s\" must be in (0, 1)" % nm)
    try:
        profile = pic_volume_profile(domain, pic, eps_levels=levels,
                                     rel_tol=float(rel_tol), conv_tol=float(conv_tol))
    except HilbertineError as e:
        if isinstance(e, NUMERICAL_ERRORS):
            raise
        raise ConfigError("bad pic: %s" % e)
    report = {
        "region": {"type": "pic", "vertices": verts},
        "levels": list(profile.eps_levels),
        "partials": list(profile.partials),
        "increments": list(profile.increments),
        "verdict": profile.verdict.value,
        "seed": seed,
    }
    _write_json(out, "cusp_profile.json", _deep_float(report))

    tri = np.vstack([domain.chart.point_to_xy(p) for p in pts])
    apex = None
    btol = 1e-7
    for i, p in enumerate(pts):
        if domain.margin_xy(tri[i:i + 1])[0] <= btol:
            apex = tri[i]
            break
    canvas = SvgCanvas()
    canvas.add_path(domain_outline_xy(domain, 256), "domain")
    canvas.add_polyline(tri, "region", closed=True)
    if apex is not None:
        for e in profile.eps_levels:
            canvas.add_circle(apex, float(e), "annulus")
    _write(out, "cusp_profile.svg", canvas.render())
    return "verdict %s" % profile.verdict.value


_COMMANDS = {
    "distance": (_run_distance, {"domain", "x", "y"}, set()),
    "classify": (_run_classify, {"matrix"}, set()),
    "volume": (_run_volume, {"domain", "region"}, {"rel_tol"}),
    "tile": (_run_tile, {"domain", "generators", "base_point", "max_word_len"},
             {"labels"}),
    "dual": (_run_dual, {"domain"}, set()),
    "limit-set": (_run_limit_set, {"generators", "max_word_len"},
                  {"domain", "labels"}),
    "ideal-triangle-scan": (_run_ideal_triangle_scan, set(), {"xs", "rel_tol"}),
    "cusp-profile": (_run_cusp_profile, {"domain", "pic"},
                     {"eps_levels", "rel_tol", "conv_tol"}),
    "dirichlet-tiling": (_run_dirichlet_tiling,
                         {"domain", "generators", "base_point", "max_word_len"},
                         {"labels"}),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hilbertine",
        description="Hilbert-geometry experiments on convex projective domains.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--out", default=".")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)

    runner, required, optional = _COMMANDS[args.command]
    if args.tol is not None and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 2
    try:
        cfg = _load_config(args.config, required, optional)
        summary = runner(cfg, args.out, args.seed, args.tol)
    except ConfigError as e:
        print("config error: %s" % e, file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as e:
        print("numerical failure: %s" % e, file=sys.stderr)
        return 3
    except HilbertineError as e:
        print("config error: %s" % e, file=sys.stderr)
        return 2
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
