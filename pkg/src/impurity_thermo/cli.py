"""``impurity-thermo``: spectra and thermodynamics tables plus a verification report.

Exit codes: 0 success, 1 verification failure, 2 configuration, IO or
non-finite-output error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, thermo
from .config import RunConfig, load_config
from .csvio import write_table
from .errors import ConfigError, ImpurityThermoError
from .parallel import ordered_map
from .statfun import Statistics
from .thermo import SumConfig
from .verify import run_checks

__all__ = ["main", "build_parser", "spectra_table", "thermo_table"]

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_ERROR = 0, 1, 2


def _meta(cfg: RunConfig, stat: Statistics, command: str) -> list[str]:
    system = (f"omega_s={cfg.omega_s!r}" if stat is Statistics.BOSE
              else f"epsilon_s={cfg.epsilon_s!r}")
    return [
        f"impurity-thermo {__version__} {command}",
        f"statistics={stat}",
        f"{system} eta={cfg.eta!r} gamma={cfg.gamma!r}",
        "units: frequencies and energies in omega_s, temperature in omega_s/k_B, entropy in k_B",
    ]


# -- spectra -----------------------------------------------------------------------

def _spectra_rows(system, stat, omega, phi):
    if stat is Statistics.BOSE:
        ss, sb = system.chi_ss(omega), system.chi_sb(omega)
    else:
        ss, sb = system.x_functions(omega)
    theta = system.vartheta(np.abs(omega))
    cols = [omega, np.real(ss), np.imag(ss), np.real(sb), np.imag(sb), phi, theta]
    return np.column_stack([np.broadcast_to(np.asarray(c, dtype=float), omega.shape) for c in cols])


def spectra_table(cfg: RunConfig, stat: Statistics):
    """Header, rows, metadata and footer of ``spectra.csv``.

    Grid points exactly at ``|omega| = omega_s`` are replaced by rows at
    ``omega_s -/+ eps`` (and mirror images) carrying the one-sided limits.
    """
    system = cfg.system(stat)
    ws = system.omega_s
    grid = cfg.omega_grid()
    grid = grid[np.abs(grid) != ws]
    phi = np.asarray(system.varphi(grid), dtype=float)
    rows = [_spectra_rows(system, stat, grid, phi)]
    eps = cfg.jump_epsilon * ws
    for side in (-1, 1):
        limit = system.varphi_sided(side) if system.coupled else 0.0
        w = np.array([-(ws + side * eps), ws + side * eps])
        w_in = (w >= cfg.omega_min) & (w <= cfg.omega_max)
        if np.any(w_in):
            sided_phi = np.array([-limit, limit])[w_in]
            rows.append(_spectra_rows(system, stat, w[w_in], sided_phi))
    table = np.concatenate(rows)
    table = table[np.argsort(table[:, 0], kind="stable")]
    name = "chi" if stat is Statistics.BOSE else "x"
    header = ["omega", f"{name}_ss_re", f"{name}_ss_im", f"{name}_sb_re", f"{name}_sb_im",
              "varphi", "vartheta_abs_omega"]
    parity_phi = float(np.max(np.abs(phi + system.varphi(-grid)))) if grid.size else 0.0
    parity_theta = float(np.max(np.abs(system.vartheta(grid) - system.vartheta(-grid))))
    meta = _meta(cfg, stat, "spectra") + [
        f"jump rows at |omega| = omega_s -/+ {eps!r} carry one-sided varphi limits",
        "vartheta column is vartheta(varpi) evaluated at varpi = |omega|",
    ]
    footer = [f"parity max|varphi(w)+varphi(-w)| = {parity_phi:.3e}",
              f"parity max|vartheta(w)-vartheta(-w)| = {parity_theta:.3e}"]
    return header, table.tolist(), meta, footer


# -- thermodynamics ----------------------------------------------------------------

def thermo_table(cfg: RunConfig, stat: Statistics):
    """Header, rows and metadata of ``thermo.csv`` over the configured temperatures."""
    sp = cfg.system(stat).provider()

    def row(T):
        pt = thermo.thermo_point(sp, float(T), cfg.sum)
        a_int = thermo.a_by_integral(sp, float(T))
        approx = thermo.high_t_asymptotics(sp, float(T)).A
        return [pt.T, pt.A, pt.U, pt.S, a_int, approx, pt.identity_residual]

    rows = ordered_map(row, cfg.temperatures())
    header = ["T", "A", "U", "S", "A_integral_route", "A_highT_approx", "identity_residual"]
    meta = _meta(cfg, stat, "thermo") + [
        "A, U, S from the Matsubara route; S = -dA/dT; A_integral_route from the frequency integral",
        "A_highT_approx: -T vartheta(0) (Bose) or the single-pole Pade form (Fermi)",
    ]
    return header, rows, meta


# -- command plumbing --------------------------------------------------------------

def _out_dir(base: Path, stat: Statistics, cfg: RunConfig) -> Path:
    return base / str(stat) if len(cfg.statistics) > 1 else base


def _cmd_spectra(cfg: RunConfig, out: Path) -> int:
    for stat in cfg.statistics:
        header, rows, meta, footer = spectra_table(cfg, stat)
        path = write_table(_out_dir(out, stat, cfg) / "spectra.csv", header, rows, meta, footer,
                           operation=f"spectra ({stat})")
        print(path)
    return EXIT_OK


def _cmd_thermo(cfg: RunConfig, out: Path) -> int:
    for stat in cfg.statistics:
        header, rows, meta = thermo_table(cfg, stat)
        path = write_table(_out_dir(out, stat, cfg) / "thermo.csv", header, rows, meta,
                           operation=f"thermo ({stat})")
        print(path)
    return EXIT_OK


def _cmd_verify(cfg: RunConfig, out: Path | None) -> int:
    report = run_checks(cfg)
    text = report.to_json()
    sys.stdout.write(text)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify.json").write_text(text, encoding="utf-8", newline="")
    return EXIT_OK if report.overall else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impurity-thermo",
        description="Hybridization thermodynamics of a bosonic or fermionic impurity in a Drude bath.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("spectra", "write spectra.csv"),
                            ("thermo", "write thermo.csv"),
                            ("verify", "run the invariant suite and print a JSON report")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="INI configuration file (defaults: paper parameters)")
        p.add_argument("--stat", choices=("bose", "fermi", "both"),
                       help="override [system] statistics")
        p.add_argument("--out", help="output directory"
                       + (" (also receives verify.json)" if name == "verify" else " (default: .)"))
        p.add_argument("--n-terms", help="override [sum] n_terms (integer or 'auto')")
        p.add_argument("--tail", choices=("euler_maclaurin", "power_law", "none"),
                       help="override [sum] tail")
    return parser


def _apply_flags(cfg: RunConfig, args) -> RunConfig:
    overrides = {}
    if args.stat:
        overrides["statistics"] = ((Statistics.BOSE, Statistics.FERMI) if args.stat == "both"
                                   else (Statistics.parse(args.stat),))
    if args.n_terms is not None or args.tail is not None:
        n_terms = cfg.sum.n_terms
        if args.n_terms is not None:
            try:
                n_terms = None if args.n_terms == "auto" else int(args.n_terms)
            except ValueError:
                raise ConfigError(f"invalid --n-terms {args.n_terms!r}", field="sum.n_terms") from None
        try:
            overrides["sum"] = SumConfig(n_terms=n_terms, tail=args.tail or cfg.sum.tail)
        except ValueError as exc:
            raise ConfigError(str(exc), field="sum") from None
    return cfg.with_overrides(**overrides)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _apply_flags(load_config(args.config), args)
        if args.command == "verify":
            return _cmd_verify(cfg, Path(args.out) if args.out else None)
        out = Path(args.out or ".")
        if args.command == "spectra":
            return _cmd_spectra(cfg, out)
        return _cmd_thermo(cfg, out)
    except ConfigError as exc:
        print(f"impurity-thermo: configuration error: {exc}", file=sys.stderr)
    except (ImpurityThermoError, ArithmeticError, ValueError) as exc:
        print(f"impurity-thermo {args.command}: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"impurity-thermo {args.command}: I/O error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
