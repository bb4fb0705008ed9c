"""Command-line front end: point analysis, grid sweeps, selection, checks.

All diagnostics go to stderr; reports go to stdout and CSV files go to the
output directory, so runs compose cleanly in shell pipelines. Exit code 0
means no errors; 1 means a validation tolerance was violated; 2 means bad
input (config, arguments, degenerate position, unwritable output).
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from dataclasses import replace

import numpy as np

from .allocation import build_allocation, select_ris
from .channel import MODES, build_pathset
from .config import ConfigError, RunConfig, default_config, load_config
from .fim import count_resolvable_paths, fim_numerical, fim_total, peb
from .geometry import SPEED_OF_LIGHT, DegeneratePositionError
from .sweep import peb_cdf, peb_map, write_cdf_csv, write_map_csv

_VALIDATE_SEED = 20260819


def _amplitude_db(magnitude: float) -> float:
    if magnitude <= 0.0:
        return -math.inf
    return 20.0 * math.log10(magnitude)


def _load(args) -> RunConfig:
    config = load_config(args.config) if args.config else default_config()
    if args.mode is not None:
        if args.mode not in MODES:
            raise ConfigError(f"--mode must be one of {', '.join(MODES)}")
        config = replace(config, mode=args.mode)
    if args.kbar is not None:
        config = replace(config, k_bar=args.kbar)
    if args.bandwidth is not None:
        config = replace(config, bandwidth_hz=args.bandwidth)
    if args.out is not None:
        config = replace(config, out_dir=args.out)
    # Re-run cross-field validation after overrides.
    config.scene()
    config.waveform()
    config.grid()
    return config


def _point_report(config: RunConfig, x) -> str:
    scene = config.scene()
    cfg = config.waveform()
    lines = [f"position_m: {x[0]:.6g}, {x[1]:.6g}", f"mode: {config.mode}"]
    if config.mode == "ris":
        allocation, _ = select_ris(scene, x, cfg,
                                   config.selection_constraints())
        lines.append(f"allocation_bits: {allocation.bits}")
        paths = build_pathset(scene, allocation, x, cfg, "ris")
    else:
        paths = build_pathset(scene, None, x, cfg, config.mode)
    for path in paths:
        mag = abs(path.alpha)
        label = path.kind if path.index is None else f"{path.kind}[{path.index}]"
        lines.append(
            f"path {label}: delay {path.tau * 1e9:.6g} ns"
            f" ({path.tau * SPEED_OF_LIGHT:.6g} m), |gain| {mag:.6g}"
            f" ({_amplitude_db(mag):.2f} dB)"
        )
    count = count_resolvable_paths(paths, cfg)
    lines.append(f"resolvable_paths: {count} of {len(paths)}")
    fim = fim_total(paths, cfg)
    lines.append(
        "fim_m2: "
        f"[[{fim.total[0, 0]:.9g}, {fim.total[0, 1]:.9g}], "
        f"[{fim.total[1, 0]:.9g}, {fim.total[1, 1]:.9g}]]"
    )
    if count <= 1:
        lines.append("peb_m: inf  # single resolvable delay, no unique fix")
    else:
        lines.append(f"peb_m: {peb(fim).value:.9g}")
    return "\n".join(lines)


def cmd_point(config: RunConfig, x) -> int:
    print(_point_report(config, x))
    return 0


def cmd_select(config: RunConfig, x) -> int:
    if config.mode != "ris":
        raise ConfigError("select requires mode = ris")
    scene = config.scene()
    cfg = config.waveform()
    constraints = config.selection_constraints()
    allocation, value = select_ris(scene, x, cfg, constraints)
    print(f"allocation_bits: {allocation.bits}")
    print(f"active_count: {sum(allocation.active)} (budget {constraints.k_bar})")
    print(f"peb_m: {value.value:.9g}")
    return 0


def cmd_sweep(config: RunConfig) -> int:
    scene = config.scene()
    cfg = config.waveform()
    constraints = config.selection_constraints() if config.mode == "ris" else None
    result = peb_map(scene, config.grid(), cfg, config.mode, constraints,
                     cap=config.peb_cap_m, workers=config.workers)
    os.makedirs(config.out_dir, exist_ok=True)
    map_path = os.path.join(config.out_dir, f"peb_map_{config.mode}.csv")
    cdf_path = os.path.join(config.out_dir, f"peb_cdf_{config.mode}.csv")
    write_map_csv(result, map_path)
    write_cdf_csv(peb_cdf(result), cdf_path)
    print(f"wrote {map_path}", file=sys.stderr)
    print(f"wrote {cdf_path}", file=sys.stderr)
    return 0


def _check_phase_gain(scene, cfg, rng):
    worst = 0.0
    m = max(r.element_count for r in scene.ris) if scene.ris else 100
    steering = np.arange(m)
    for _ in range(25):
        theta, psi = rng.uniform(-math.pi / 2, math.pi / 2, size=2)
        profile = -math.pi * (math.sin(theta) + math.sin(psi)) * steering
        h = np.exp(1j * math.pi * math.sin(theta) * steering)
        g = np.exp(1j * math.pi * math.sin(psi) * steering)
        gain = abs(np.sum(h * np.exp(1j * profile) * g))
        worst = max(worst, abs(gain - m) / m)
    return worst, 1e-9


def _check_fim_oracle(scene, cfg, grid, rng):
    worst = 0.0
    modes = ["ris"]
    if scene.reflector is not None:
        modes.append("reflector")
    if scene.scatterer is not None:
        modes.append("scatterer")
    for mode in modes:
        done = 0
        while done < 8:
            p = np.array([rng.uniform(*grid.x_range),
                          rng.uniform(*grid.y_range)])
            try:
                if mode == "ris":
                    allocation = build_allocation(
                        scene, p, cfg, (1,) * len(scene.ris))
                else:
                    allocation = None
                paths = build_pathset(scene, allocation, p, cfg, mode)
            except DegeneratePositionError:
                continue
            done += 1
            reference = fim_numerical(paths, cfg)
            candidate = fim_total(paths, cfg).total
            scale = np.linalg.norm(reference)
            if scale == 0.0:
                continue
            worst = max(worst, np.linalg.norm(candidate - reference) / scale)
    return worst, 1e-5


def _check_selection(scene, cfg, constraints, grid, rng):
    mismatches = 0
    for _ in range(3):
        p = np.array([rng.uniform(*grid.x_range), rng.uniform(*grid.y_range)])
        try:
            chosen, _ = select_ris(scene, p, cfg, constraints)
        except DegeneratePositionError:
            continue
        best = None
        for bits in itertools.product((0, 1), repeat=len(scene.ris)):
            if sum(bits) > constraints.k_bar:
                continue
            ones = [i for i, bit in enumerate(bits) if bit]
            gaps = [b - a for a, b in zip(ones, ones[1:])]
            if gaps and not min(gaps) > constraints.min_gap:
                continue
            allocation = build_allocation(scene, p, cfg, bits)
            value = peb(fim_total(
                build_pathset(scene, allocation, p, cfg, "ris"), cfg)).value
            key = (value, bits, sum(bits))
            if best is None or key < best:
                best = key
        if chosen.active != best[1]:
            mismatches += 1
    return float(mismatches), 0.5


def cmd_validate(config: RunConfig) -> int:
    scene = config.scene()
    cfg = config.waveform()
    grid = config.grid()
    rng = np.random.default_rng(_VALIDATE_SEED)
    checks = [
        ("phase_gain", _check_phase_gain(scene, cfg, rng)),
        ("fim_oracle", _check_fim_oracle(scene, cfg, grid, rng)),
        ("selection_oracle",
         _check_selection(scene, cfg, config.selection_constraints(), grid,
                          rng)),
    ]
    failures = 0
    for name, (worst, tol) in checks:
        status = "ok" if worst <= tol else "FAIL"
        failures += status == "FAIL"
        print(f"check {name}: {status} (worst {worst:.3g}, tolerance {tol:g})")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a run configuration file")
    common.add_argument("--mode", choices=MODES,
                        help="override the configured mode")
    common.add_argument("--kbar", type=int,
                        help="override the activation budget")
    common.add_argument("--bandwidth", type=float,
                        help="override the bandwidth in Hz")
    common.add_argument("--out", help="override the output directory")

    parser = argparse.ArgumentParser(
        prog="rispeb",
        description="Position error bounds for RIS-aided downlink "
                    "localization",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_point = sub.add_parser("point", parents=[common],
                             help="analyze a single user position")
    p_point.add_argument("x", type=float)
    p_point.add_argument("y", type=float)
    p_select = sub.add_parser("select", parents=[common],
                              help="pick the best RIS activation at a point")
    p_select.add_argument("x", type=float)
    p_select.add_argument("y", type=float)
    sub.add_parser("sweep", parents=[common],
                   help="run a grid sweep and write map/CDF CSV files")
    sub.add_parser("validate", parents=[common],
                   help="run internal consistency checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load(args)
        if args.command == "point":
            return cmd_point(config, np.array([args.x, args.y]))
        if args.command == "select":
            return cmd_select(config, np.array([args.x, args.y]))
        if args.command == "sweep":
            return cmd_sweep(config)
        return cmd_validate(config)
    except (ConfigError, DegeneratePositionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
