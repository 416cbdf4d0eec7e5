"""Command-line front end.

``shellwave <subcommand> --scenario FILE --out DIR [--grid-scale K] [--eps-sweep]``

Exit codes: 0 success, 1 invalid input (with ``error: <code>: <message>`` on
stderr), 2 verification failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ShellwaveError, ValidationError
from .geometry import complex_distance, disk_mask, singular_mask
from .hertz import HertzPotential, bound_sources, em_fields
from .huygens import PrescribedField, transitional_sources
from .profiles import septic
from .scenario import Scenario
from .shell import RegularizedField, ShellSpec, shell_source_density
from .verification import GRID_POINTS, run_all, wavelet_hertz_pair
from .wavelets import external_field, internal_field, jump_field

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 1, 2
SUBCOMMANDS = ("scalar-field", "shell-source", "em-field", "em-source", "huygens", "verify")
BASE_COLUMNS = ["x", "y", "z", "t", "p", "q", "excluded"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser():
    ap = _Parser(prog="shellwave", description="Pulsed-beam wavelets with spheroidal shell sources.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--scenario", required=True, help="scenario file (key = value lines)")
    ap.add_argument("--out", required=True, help="output directory")
    ap.add_argument("--grid-scale", type=int, default=1, help="refine the grid spacing by this factor")
    ap.add_argument("--eps-sweep", action="store_true", help="repeat for eps, eps/2, eps/4")
    return ap


# ---------------------------------------------------------------- grid output


def _ordered_points(grid):
    # rows: z, then y, then x (x fastest)
    return np.transpose(grid.points(), (2, 1, 0, 3)).reshape(-1, 3)


def _split(z, prefix):
    z = np.asarray(z)
    if z.ndim == 1:
        return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}
    out = {}
    for part, fn in (("re", np.real), ("im", np.imag)):
        for i, c in enumerate("xyz"):
            out[f"{prefix}{c}_{part}"] = fn(z[:, i])
    return out


def _scalar_field(scn, pts, t):
    params = scn.params()
    shell = scn.shell()
    cfg = params.cfg
    bad_focal = singular_mask(pts, cfg)
    bad_jump = bad_focal | disk_mask(pts, cfg)
    cols = {}
    cols.update(_split(internal_field(params, pts, t), "psi1"))
    psi2 = np.full(len(pts), np.nan + 0j)
    psi2[~bad_focal] = external_field(params, pts[~bad_focal], t[~bad_focal])
    cols.update(_split(psi2, "psi2"))
    psij = np.full(len(pts), np.nan + 0j)
    psij[~bad_jump] = jump_field(params, pts[~bad_jump], t[~bad_jump])
    cols.update(_split(psij, "psiJ"))
    cols.update(_split(RegularizedField(params, shell)(pts, t), "psiA"))
    return cols, bad_jump, {}


def _shell_source(scn, pts, t):
    params = scn.params()
    S = shell_source_density(params, scn.shell(), pts, t)
    return _split(S, "S"), np.zeros(len(pts), dtype=bool), {}


def _em_field(scn, pts, t):
    params = scn.params()
    Z = HertzPotential(scn.polarization_vector(), RegularizedField(params, scn.shell()))
    f = em_fields(Z, pts, t)
    cols = {}
    for name in ("E", "B", "D", "H"):
        v = getattr(f, name)
        for i, c in enumerate("xyz"):
            cols[f"{name}{c}"] = v[:, i]
    return cols, np.zeros(len(pts), dtype=bool), {}


def _source_shell(scn):
    shell = scn.shell()
    if shell.profile.smoothness >= 3:
        return shell, {}
    # grad S contains h''': fall back to the C3 septic with the same half-width
    return ShellSpec(scn.alpha, septic(scn.eps)), {"bound_source_profile": "septic (scenario profile is only C2)"}


def _em_source(scn, pts, t):
    params = scn.params()
    shell, meta = _source_shell(scn)
    bs = bound_sources(params, shell, scn.polarization_vector(), pts, t)
    cols = {"rho_b": bs.rho_b}
    for i, c in enumerate("xyz"):
        cols[f"Jb{c}"] = bs.J_b[:, i]
    cols["rho_m"] = bs.rho_m
    cols["Jm_abs"] = np.linalg.norm(bs.J_m, axis=-1)
    return cols, np.zeros(len(pts), dtype=bool), meta


def _huygens(scn, pts, t):
    params = scn.params()
    cfg = params.cfg
    tr = scn.transition()
    Z1, Z2 = wavelet_hertz_pair(scn)
    fields = (PrescribedField.from_hertz(Z1), PrescribedField.from_hertz(Z2))
    act = tr.active(pts, t)
    bad = act & (singular_mask(pts, cfg) | disk_mask(pts, cfg))
    ok = ~bad
    rho = np.full(len(pts), np.nan + 0j)
    J = np.full((len(pts), 3), np.nan + 0j)
    ts = transitional_sources(tr, fields, pts[ok], t[ok])
    rho[ok], J[ok] = ts.rho, ts.J
    cols = {"rho_e": rho.real}
    cols.update({f"J{c}_e": J[:, i].real for i, c in enumerate("xyz")})
    cols["rho_m"] = rho.imag
    cols.update({f"J{c}_m": J[:, i].imag for i, c in enumerate("xyz")})
    meta = {"zone": scn.zone, "zone_p1": tr.p1, "zone_p2": tr.p2, "transition_profile": tr.profile.name}
    return cols, bad, meta


QUANTITIES = {
    "scalar-field": _scalar_field,
    "shell-source": _shell_source,
    "em-field": _em_field,
    "em-source": _em_source,
    "huygens": _huygens,
}


def grid_table(scn: Scenario, subcommand: str, grid_scale: int = 1):
    """Columns and rows of the CSV for ``subcommand``; rows are t-major, then z, y, x."""
    grid = scn.grid(grid_scale)
    xyz = _ordered_points(grid)
    blocks, header, meta = [], None, {}
    for tval in scn.times:
        t = np.full(len(xyz), float(tval))
        cols, excluded, meta = QUANTITIES[subcommand](scn, xyz, t)
        cd = complex_distance(xyz, scn.source_config())
        base = [xyz[:, 0], xyz[:, 1], xyz[:, 2], t, cd.p, cd.q, excluded.astype(float)]
        names = list(cols)
        blocks.append(np.column_stack(base + [np.asarray(cols[k], dtype=float) for k in names]))
        header = BASE_COLUMNS + names
    return header, np.vstack(blocks), meta


def write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        np.savetxt(fh, rows, fmt="%.17g", delimiter=",")


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, rows


def _write_meta(path, scn, extra):
    lines = [f"seed: {scn.seed}", f"profile: {scn.profile}", f"signal: {scn.signal}"]
    lines += [f"{k}: {v}" for k, v in extra.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def _scenarios(scn, sweep):
    if not sweep:
        return [("", scn)]
    return [(f"_eps{scn.eps / k:g}", scn.with_eps(scn.eps / k)) for k in (1, 2, 4)]


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.grid_scale < 1:
        raise ValidationError("--grid-scale must be a positive integer")
    scn = Scenario.from_file(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.subcommand.replace("-", "_")
    if args.subcommand == "verify":
        ok = True
        grid_points = (GRID_POINTS - 1) * args.grid_scale + 1
        for suffix, s in _scenarios(scn, args.eps_sweep):
            results = run_all(s, grid_points=grid_points)
            for r in results:
                print(r.line() + (f" [eps={s.eps:g}]" if suffix else ""))
            (out / f"verify{suffix}.txt").write_text("\n".join(r.to_text() for r in results))
            ok = ok and all(r.passed for r in results)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    for suffix, s in _scenarios(scn, args.eps_sweep):
        header, rows, meta = grid_table(s, args.subcommand, args.grid_scale)
        write_csv(out / f"{stem}{suffix}.csv", header, rows)
        _write_meta(out / f"{stem}{suffix}.meta", s, {"eps": s.eps, **meta})
    return EXIT_OK


def main(argv=None) -> int:
    try:
        return run(argv)
    except ShellwaveError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
