"""Command-line front end: analysis commands and experiment sweeps.

Commands
--------
analyze       per-qubit loss verdicts, two-term form, GHZ-class operation
majorana      point constellation and regular-polygon verdict
dicke-sweep   normalization / pair-determinant / negativity tables over u
mu-scan       two-loss fragility scan of the four-qubit mu family
random-sweep  certified-robust fractions of Haar-random states vs loss count

Every command is deterministic given (inputs, flags, seed).  Sweeps emit
CSV (stdout, or --output FILE plus a rendered .png figure next to it);
single-state commands print structured text and accept --output for a CSV
side channel.  Exit codes: 0 success, 1 domain error, 2 parse failure,
3 normalization, 4 size, 5 symmetry, 6 I/O.
"""

from __future__ import annotations

import argparse
import math
import sys
from itertools import combinations
from pathlib import Path

import numpy as np

from . import __version__
from .dicke_family import (
    FRAGILITY_THRESHOLD,
    FamilyPoint,
    family_normalization,
    family_state,
    in_mu_domain,
    negativity_after_loss,
    pair_negativity,
    pair_pt_determinant,
    predicted_two_loss_fragile,
    reduced_pair_state,
)
from .io import (
    NormalizationError,
    StateFileError,
    format_value,
    load_state_file,
    write_csv,
)
from .plotting import (
    plot_determinant_curves,
    plot_fragility_report,
    plot_majorana_points,
    plot_mu_scan,
    plot_random_sweep,
)
from .robustness import analyze_fragility, ghz_class_operation, regular_polygon_test
from .separability import single_cut_negativities
from .states import (
    SymmetryError,
    ghz_state,
    haar_random_state,
    majorana_to_symmetric,
    partial_trace,
    pure_to_symmetric,
    state_fidelity,
    symmetric_to_majorana,
    symmetric_to_pure,
)

__all__ = ["main", "run", "SizeError",
           "dicke_sweep_rows", "mu_scan_rows", "random_sweep_rows"]

MIN_QUBITS = 3
MAX_SWEEP_QUBITS = 12
MAX_VERIFY_QUBITS = 10
VERIFY_FIDELITY_TOL = 1e-8

MU_RE_MAX = math.sqrt(6.0)
MU_IM_MAX = 2.5
BOUNDARY_VERTICES = 8192


class SizeError(Exception):
    """Qubit count outside the range a command supports."""


def _format_float(value, digits=12):
    return f"{value:.{digits}g}"


def _format_complex(value):
    return f"{value.real:.12g}{value.imag:+.12g}j"


def _format_set(labels):
    return "{" + ", ".join(str(x) for x in labels) + "}"


def _emit_csv(output, fieldnames, rows, metadata, trailing=(), figure=None):
    """Write CSV to stdout or ``output``; render ``figure`` beside a file."""
    if output is None:
        write_csv(sys.stdout, fieldnames, rows, metadata, trailing)
        return
    path = Path(output)
    with path.open("w", newline="") as stream:
        write_csv(stream, fieldnames, rows, metadata, trailing)
    if figure is not None:
        figure_path = path.with_suffix(".png")
        if figure_path == path:
            figure_path = path.with_name(path.name + ".png")
        figure(figure_path)


def _load(args):
    return load_state_file(
        args.state_file, renormalize=args.renormalize, tolerance=args.tolerance
    )


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args):
    loaded = _load(args)
    state = loaded.pure
    if state.num_qubits < MIN_QUBITS:
        raise SizeError(f"analysis requires N >= 3, got N = {state.num_qubits}")
    report = analyze_fragility(state)
    operation = ghz_class_operation(state, report) if report.ghz_class else None

    print(f"state file: {args.state_file}")
    print(f"source: {loaded.source}")
    print(f"qubits: {state.num_qubits}")
    rows = []
    print("per-qubit verdicts:")
    for label in range(1, state.num_qubits + 1):
        residual = partial_trace(state, (label,))
        dominant = float(residual.eigenvalues()[-1])
        fragile = report.fragile[label]
        rows.append({"qubit": label, "fragile": fragile, "dominant_weight": dominant})
        verdict = "fragile" if fragile else "robust"
        print(f"  qubit {label}: {verdict} (dominant residual eigenvalue"
              f" {_format_float(dominant)})")
    print(f"fragile set A: {_format_set(report.fragile_set)}")
    form = report.canonical_form
    if form is not None:
        print(f"two-term form: p = {_format_float(form.weight, 17)}")
        overlap = float(np.max(np.abs(form.overlaps())))
        print(f"  worst factor overlap on A: {overlap:.3e}")
        print(f"  orthogonal factor pairs on: {_format_set(form.orthogonal_set)}")
    print(f"GHZ class: {'true' if report.ghz_class else 'false'}")
    if operation is not None:
        print("invertible local operation onto the GHZ state (row-major 2x2 per qubit):")
        for label, factor in enumerate(operation.factors, start=1):
            entries = ", ".join(_format_complex(x) for x in factor.reshape(-1))
            print(f"  qubit {label}: [{entries}]")

    if args.verify and not _verify_analysis(state, report, operation):
        raise ValueError("analysis verification failed")

    metadata = {
        "command": "analyze",
        "version": __version__,
        "source": loaded.source,
        "num_qubits": state.num_qubits,
        "fragile_set": ";".join(str(x) for x in report.fragile_set),
        "ghz_class": report.ghz_class,
        "tolerance": args.tolerance,
    }
    if form is not None:
        metadata["p"] = form.weight
    _emit_csv(
        args.output,
        ["qubit", "fragile", "dominant_weight"],
        rows,
        metadata,
        figure=lambda path: plot_fragility_report(rows, path),
    )
    return 0


def _verify_analysis(state, report, operation):
    """Independent cross-checks of the reported structure; prints findings."""
    ok = True
    print("verification:")
    form = report.canonical_form
    if form is not None:
        fidelity = state_fidelity(form.reconstruct(), state)
        good = fidelity >= 1.0 - VERIFY_FIDELITY_TOL
        ok &= good
        print(f"  two-term reconstruction fidelity: {_format_float(fidelity, 17)}"
              f" ({'ok' if good else 'FAILED'})")
        missing = [q for q in report.fragile_set if q not in form.orthogonal_set]
        if missing:
            ok = False
            print(f"  FAILED: fragile qubits without orthogonal factors: {missing}")
    for label in range(1, state.num_qubits + 1):
        residual = partial_trace(state, (label,))
        if residual.num_qubits < 2:
            continue
        witness = max(single_cut_negativities(residual))
        if report.fragile[label]:
            good = witness <= 1e-10
            ok &= good
            print(f"  qubit {label}: residual single-cut negativity {witness:.3e}"
                  f" ({'consistent with separable' if good else 'FAILED: NPT residual'})")
        elif witness > 1e-10:
            print(f"  qubit {label}: residual NPT witness {witness:.3e} (confirms robust)")
        else:
            print(f"  qubit {label}: no single-cut NPT witness;"
                  " robust verdict rests on the exact rank-2 decision")
    if operation is not None:
        image = operation.apply_normalized(state)
        fidelity = state_fidelity(image, ghz_state(state.num_qubits))
        good = fidelity >= 1.0 - VERIFY_FIDELITY_TOL
        ok &= good
        print(f"  GHZ image fidelity: {_format_float(fidelity, 17)}"
              f" ({'ok' if good else 'FAILED'})")
    return ok


# ---------------------------------------------------------------------------
# majorana


def cmd_majorana(args):
    loaded = _load(args)
    if loaded.symmetric is not None:
        symmetric = loaded.symmetric
    else:
        symmetric = pure_to_symmetric(loaded.pure, tolerance=args.tolerance)
    points = symmetric_to_majorana(symmetric)
    polygon = regular_polygon_test(points)

    print(f"state file: {args.state_file}")
    print(f"qubits: {symmetric.num_qubits}")
    print(f"distinct points: {len(points.multiplicities)}")
    rows = []
    for index, (point, multiplicity) in enumerate(
        zip(points.points, points.multiplicities), start=1
    ):
        rows.append({
            "x": point[0], "y": point[1], "z": point[2], "multiplicity": multiplicity,
        })
        coords = ", ".join(_format_float(c) for c in point)
        print(f"  point {index}: ({coords})  multiplicity {multiplicity}")
    plane = _fit_plane(points)
    if plane is None:
        print("fitted plane: undefined (fewer than three distinct points)")
    else:
        normal, offset, residual = plane
        coords = ", ".join(_format_float(c) for c in normal)
        print(f"fitted plane: normal = ({coords}), offset {_format_float(offset)},"
              f" residual {residual:.3e}")
    print(f"regular polygon: {'true' if polygon else 'false'}")
    if symmetric.num_qubits < MIN_QUBITS:
        print("note: the polygon characterization applies to N >= 3 only")

    if args.verify:
        rebuilt = symmetric_to_pure(majorana_to_symmetric(points))
        fidelity = state_fidelity(rebuilt, symmetric_to_pure(symmetric))
        good = fidelity >= 1.0 - VERIFY_FIDELITY_TOL
        print("verification:")
        print(f"  point round-trip fidelity: {_format_float(fidelity, 17)}"
              f" ({'ok' if good else 'FAILED'})")
        if not good:
            raise ValueError("point round-trip verification failed")

    metadata = {
        "command": "majorana",
        "version": __version__,
        "num_qubits": symmetric.num_qubits,
        "distinct_points": len(points.multiplicities),
        "regular_polygon": polygon,
        "tolerance": args.tolerance,
    }
    _emit_csv(
        args.output,
        ["x", "y", "z", "multiplicity"],
        rows,
        metadata,
        figure=lambda path: plot_majorana_points(points.points, points.multiplicities, path),
    )
    return 0


def _fit_plane(points):
    coords = np.asarray(points.points, dtype=float)
    if coords.shape[0] < 3:
        return None
    centroid = coords.mean(axis=0)
    centered = coords - centroid
    _, _, vh = np.linalg.svd(centered, full_matrices=False)
    normal = vh[2]
    residual = float(np.max(np.abs(centered @ normal)))
    return normal, float(normal @ centroid), residual


# ---------------------------------------------------------------------------
# dicke-sweep


def _u_grid(u_min, u_max, u_step):
    if u_min < 0.0 or u_step <= 0.0 or u_max < u_min:
        raise ValueError("need 0 <= u-min <= u-max and u-step > 0")
    count = int(math.floor((u_max - u_min) / u_step + 1e-9)) + 1
    return [u_min + i * u_step for i in range(count)]


def dicke_sweep_rows(n_values, k_lists, u_values):
    """Sweep rows in (N, k, u) ascending order.

    ``k_lists`` maps each N to its excitation list.
    """
    rows = []
    for n in sorted(n_values):
        for k in sorted(k_lists[n]):
            for u in u_values:
                point = FamilyPoint(n, k, float(u))
                rows.append({
                    "N": n,
                    "k": k,
                    "u": float(u),
                    "A": family_normalization(point),
                    "det_pt": pair_pt_determinant(point),
                    "negativity": pair_negativity(point),
                })
    return rows


def _verify_dicke_rows(n_values, k_lists, u_values, tolerance):
    """Entrywise closed form vs the brute-force reduction of the built state."""
    worst = 0.0
    for n in sorted(n_values):
        for k in sorted(k_lists[n]):
            for u in u_values:
                point = FamilyPoint(n, k, float(u))
                direct = partial_trace(family_state(point), tuple(range(3, n + 1)))
                deviation = float(np.max(np.abs(
                    reduced_pair_state(point).matrix - direct.matrix
                )))
                worst = max(worst, deviation)
                if deviation > tolerance:
                    raise ValueError(
                        f"closed form deviates from the brute-force reduction by "
                        f"{deviation:.3e} at N={n}, k={k}, u={u}"
                    )
    return worst


def cmd_dicke_sweep(args):
    n_values = tuple(args.n_list) if args.n_list else (args.n,)
    if any(n < MIN_QUBITS for n in n_values):
        raise SizeError("family sweep requires N >= 3")
    k_lists = {}
    for n in n_values:
        k_values = tuple(args.k_list) if args.k_list else tuple(range(1, max(n // 2, 1) + 1))
        if any(not 1 <= k <= n - 1 for k in k_values):
            raise ValueError(f"excitation counts must lie in 1..{n - 1} for N = {n}")
        k_lists[n] = k_values
    u_values = _u_grid(args.u_min, args.u_max, args.u_step)

    metadata = {
        "command": "dicke-sweep",
        "version": __version__,
        "n_list": ";".join(str(n) for n in sorted(n_values)),
        "k_list": ";".join(str(k) for k in k_lists[sorted(n_values)[0]]),
        "u_min": args.u_min,
        "u_max": args.u_max,
        "u_step": args.u_step,
    }
    rows = dicke_sweep_rows(n_values, k_lists, u_values)
    trailing = []
    if args.verify:
        if any(n > MAX_VERIFY_QUBITS for n in n_values):
            raise SizeError("closed-form verification requires N <= 10")
        worst = _verify_dicke_rows(n_values, k_lists, u_values, args.tolerance)
        metadata["verify_tolerance"] = args.tolerance
        trailing.append(f"verify worst_entry_deviation={worst:.3e} ok=true")
    _emit_csv(
        args.output,
        ["N", "k", "u", "A", "det_pt", "negativity"],
        rows,
        metadata,
        trailing,
        figure=lambda path: plot_determinant_curves(rows, path),
    )
    return 0


# ---------------------------------------------------------------------------
# mu-scan


def _boundary_vertices(t):
    if t == 1:
        return np.array([[0.0, 0.0]])
    re = np.linspace(0.0, MU_RE_MAX, BOUNDARY_VERTICES)
    im = np.sqrt(np.clip((MU_RE_MAX - re) * re, 0.0, None))
    return np.column_stack([re, im])


def _min_distances(points, vertices, chunk=512):
    """Distance from each point to the nearest vertex (dense polyline)."""
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start:start + chunk]
        deltas = block[:, None, :] - vertices[None, :, :]
        out[start:start + chunk] = np.sqrt((deltas ** 2).sum(axis=2)).min(axis=1)
    return out


def mu_scan_rows(t, re_points, im_points, tolerance):
    """Scan rows plus (summary dict, boundary polyline).

    Grid: Re in [0, sqrt(6)], Im in [0, 2.5], row order Re-major ascending.
    Predicted fragility: the region formula for t = 2; only mu = 0 for
    t = 1; false outside the fundamental domain.  Observed fragility:
    residual negativity <= tolerance.
    """
    re_values = np.linspace(0.0, MU_RE_MAX, re_points)
    im_values = np.linspace(0.0, MU_IM_MAX, im_points)
    rows = []
    for re in re_values:
        for im in im_values:
            mu = complex(re, im)
            in_s = in_mu_domain(mu)
            if not in_s:
                predicted = False
            elif t == 2:
                predicted = predicted_two_loss_fragile(mu)
            else:
                predicted = mu == 0
            value = negativity_after_loss(mu, t)
            rows.append({
                "Re_mu": float(re),
                "Im_mu": float(im),
                "in_S": in_s,
                "negativity_t": value,
                "fragile_predicted": predicted,
                "fragile_observed": value <= tolerance,
            })

    boundary = _boundary_vertices(t)
    step = max(
        re_values[1] - re_values[0] if re_points > 1 else 0.0,
        im_values[1] - im_values[0] if im_points > 1 else 0.0,
    )
    in_s_rows = [row for row in rows if row["in_S"]]
    agree = [row["fragile_predicted"] == row["fragile_observed"] for row in in_s_rows]
    coords = np.array([[row["Re_mu"], row["Im_mu"]] for row in in_s_rows])
    if len(coords):
        off = _min_distances(coords, boundary) > step
    else:
        off = np.zeros(0, dtype=bool)
    off_agree = [a for a, o in zip(agree, off) if o]
    summary = {
        "in_S_points": len(in_s_rows),
        "in_S_agreement": (sum(agree) / len(agree)) if agree else 1.0,
        "off_boundary_points": len(off_agree),
        "off_boundary_agreement": (sum(off_agree) / len(off_agree)) if off_agree else 1.0,
        "boundary_step": step,
    }
    return rows, summary, boundary


def cmd_mu_scan(args):
    if args.re_points < 2 or args.im_points < 2:
        raise ValueError("need at least 2 grid points per axis")
    rows, summary, boundary = mu_scan_rows(
        args.t, args.re_points, args.im_points, args.tolerance
    )
    metadata = {
        "command": "mu-scan",
        "version": __version__,
        "t": args.t,
        "re_points": args.re_points,
        "im_points": args.im_points,
        "re_max": MU_RE_MAX,
        "im_max": MU_IM_MAX,
        "tolerance": args.tolerance,
        "mu_sqrt2i_exemption": "disc-clause-only",
    }
    if args.t == 1:
        metadata["t1_prediction"] = "mu-equals-zero"
    trailing = ["summary " + " ".join(
        f"{key}={format_value(value)}" for key, value in summary.items()
    )]
    _emit_csv(
        args.output,
        ["Re_mu", "Im_mu", "in_S", "negativity_t", "fragile_predicted", "fragile_observed"],
        rows,
        metadata,
        trailing,
        figure=lambda path: plot_mu_scan(rows, path, boundary),
    )
    return 0


# ---------------------------------------------------------------------------
# random-sweep


def _certified_robust(state, t, tolerance):
    """Every size-t loss leaves a residual with an NPT single-qubit cut."""
    for lost in combinations(state.qubit_labels, t):
        residual = partial_trace(state, lost)
        if max(single_cut_negativities(residual)) <= tolerance:
            return False
    return True


def random_sweep_rows(num_qubits, t_values, samples, seed, tolerance):
    """Certified-robust fractions per loss count over Haar-random states.

    One generator, one state per sample regardless of ``t_values``, so rows
    are reproducible from (num_qubits, samples, seed) alone.
    """
    rng = np.random.default_rng(seed)
    t_values = sorted(set(t_values))
    counts = {t: 0 for t in t_values}
    for _ in range(samples):
        state = haar_random_state(num_qubits, rng)
        for t in t_values:
            if _certified_robust(state, t, tolerance):
                counts[t] += 1
    return [
        {
            "t": t,
            "samples": samples,
            "certified_robust": counts[t],
            "not_certified": samples - counts[t],
            "fraction_robust": counts[t] / samples,
        }
        for t in t_values
    ]


def cmd_random_sweep(args):
    if not MIN_QUBITS <= args.n <= MAX_SWEEP_QUBITS:
        raise SizeError(f"random sweep requires 3 <= N <= {MAX_SWEEP_QUBITS}, got {args.n}")
    t_values = tuple(args.t_list) if args.t_list else tuple(range(1, args.n - 1))
    if any(not 1 <= t <= args.n - 2 for t in t_values):
        raise ValueError(f"loss counts must lie in 1..{args.n - 2} for N = {args.n}")
    if args.samples < 1:
        raise ValueError("need at least one sample")
    rows = random_sweep_rows(args.n, t_values, args.samples, args.seed, args.tolerance)
    metadata = {
        "command": "random-sweep",
        "version": __version__,
        "num_qubits": args.n,
        "samples": args.samples,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "witness": "single-qubit-cut negativity over every lost subset",
    }
    _emit_csv(
        args.output,
        ["t", "samples", "certified_robust", "not_certified", "fraction_robust"],
        rows,
        metadata,
        figure=lambda path: plot_random_sweep(rows, path),
    )
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch


def _int_list(text):
    return tuple(int(part) for part in text.split(",") if part.strip())


def _add_state_flags(parser, tolerance_help):
    parser.add_argument("state_file", help="JSON state file (amplitudes or dicke)")
    parser.add_argument("--output", default=None,
                        help="write a CSV here and a .png figure beside it")
    parser.add_argument("--tolerance", type=float, default=FRAGILITY_THRESHOLD,
                        help=tolerance_help)
    parser.add_argument("--renormalize", action="store_true",
                        help="accept and renormalize unnormalized inputs")
    parser.add_argument("--verify", action="store_true",
                        help="run independent cross-checks and report them")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qloss",
        description="Entanglement robustness and fragility of N-qubit states "
                    "against particle loss.",
    )
    parser.add_argument("--version", action="version", version=f"qloss {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(
        "analyze", help="per-qubit loss verdicts, two-term form, GHZ-class operation"
    )
    _add_state_flags(
        analyze, "norm acceptance tolerance for the input state (default 1e-9)"
    )
    analyze.set_defaults(func=cmd_analyze)

    majorana = sub.add_parser(
        "majorana", help="point constellation and regular-polygon verdict"
    )
    _add_state_flags(
        majorana, "symmetry and norm acceptance tolerance (default 1e-9)"
    )
    majorana.set_defaults(func=cmd_majorana)

    dicke = sub.add_parser(
        "dicke-sweep", help="normalization, pair determinant, and negativity over u"
    )
    group = dicke.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="qubit count")
    group.add_argument("--n-list", type=_int_list,
                       help="comma-separated qubit counts (rows ordered by N, k, u)")
    dicke.add_argument("--k-list", type=_int_list, default=None,
                       help="comma-separated excitation counts (default 1..N/2)")
    dicke.add_argument("--u-min", type=float, default=0.0)
    dicke.add_argument("--u-max", type=float, default=3.0)
    dicke.add_argument("--u-step", type=float, default=0.05)
    dicke.add_argument("--output", default=None,
                       help="write the CSV here and a .png figure beside it")
    dicke.add_argument("--tolerance", type=float, default=1e-12,
                       help="entrywise tolerance for --verify (default 1e-12)")
    dicke.add_argument("--verify", action="store_true",
                       help="cross-check the closed form against the brute-force "
                            "reduction (N <= 10)")
    dicke.set_defaults(func=cmd_dicke_sweep)

    mu = sub.add_parser(
        "mu-scan", help="fragility scan of the four-qubit mu family after t losses"
    )
    mu.add_argument("--t", type=int, choices=(1, 2), default=2,
                    help="number of qubits lost (default 2)")
    mu.add_argument("--re-points", type=int, default=201,
                    help="grid points over Re mu in [0, sqrt(6)] (default 201)")
    mu.add_argument("--im-points", type=int, default=201,
                    help="grid points over Im mu in [0, 2.5] (default 201)")
    mu.add_argument("--output", default=None,
                    help="write the CSV here and a .png figure beside it")
    mu.add_argument("--tolerance", type=float, default=FRAGILITY_THRESHOLD,
                    help="negativity threshold for observed fragility (default 1e-9)")
    mu.set_defaults(func=cmd_mu_scan)

    sweep = sub.add_parser(
        "random-sweep", help="certified-robust fractions of Haar-random states"
    )
    sweep.add_argument("--n", type=int, required=True, help="qubit count (3..12)")
    sweep.add_argument("--t-list", type=_int_list, default=None,
                       help="comma-separated loss counts (default 1..N-2)")
    sweep.add_argument("--samples", type=int, default=500)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--output", default=None,
                       help="write the CSV here and a .png figure beside it")
    sweep.add_argument("--tolerance", type=float, default=FRAGILITY_THRESHOLD,
                       help="negativity witness threshold (default 1e-9)")
    sweep.set_defaults(func=cmd_random_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NormalizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except SymmetryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 6
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run():
    sys.exit(main())
