"""
Aplicação de linha de comando do randcorr.

Subcomandos: design, moments, fig2a, fig2b, fig3a, fig3b, scan-bd e
calibrate. JSON vai para stdout, logs para stderr e tabelas para CSV em
``--out``, sempre acompanhadas de um manifesto de execução.

Códigos de saída: 0 sucesso, 1 erro de uso, 2 falha de verificação ou de
correção de critério.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Optional, Sequence

import config
from src.core.criteria import clear_params_cache, criterion_F, criterion_R6
from src.core.designs import (
    SphericalDesign,
    UnitaryDesign,
    build_design,
    design_from_dict,
    design_to_dict,
    load_design,
    project_to_sphere,
    save_design,
    sl2f5_design,
    sl2f5_printed_generators,
    verify_spherical_design,
    verify_unitary_design,
)
from src.core.moments import bd_moments, moments
from src.core.qcore import correlation_tensor, partial_trace
from src.processors import figures
from src.processors.witness_opt import compute_line_params
from src.utils.errors import (
    ClosureSizeMismatch,
    DedupSizeMismatch,
    DesignParseError,
    NonUnitaryResult,
    NotDetected,
    RandCorrError,
    SlopeSignViolation,
    StateSpecError,
    VerificationFailure,
)
from src.utils.io import RunManifest, dumps, read_json, utc_now, write_csv, write_json
from src.utils.logger import setup_logger
from src.utils.parallel import resolve_threads
from src.utils.state_spec import parse_state

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2
FAILURE_ERRORS = (
    VerificationFailure,
    ClosureSizeMismatch,
    NonUnitaryResult,
    DedupSizeMismatch,
    SlopeSignViolation,
    NotDetected,
)
ENGINE_ALIASES = {"design": "design", "mc": "montecarlo", "monomial": "monomial", "bd": "bd"}

STATE_HELP = (
    "bell | mixed[:N] | ghz:N | w:N | dicke:N,k | bd:c1,c2,c3 | "
    "noisyghz:N,p | psitheta:N,theta | file:caminho.json"
)


class UsageError(RandCorrError, ValueError):
    """Erro de argumentos detectado pelo argparse."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _Run:
    """Contexto de uma execução: diretório de saída e manifesto."""

    def __init__(self, args: argparse.Namespace, argv: Sequence[str]):
        self.args = args
        self.out = Path(args.out)
        self.manifest = RunManifest(list(argv), args.seed, resolve_threads(args.threads))

    def csv(self, df, name: str) -> Path:
        path = write_csv(df, self.out / name)
        self.manifest.add_output(path)
        return path

    def json(self, payload, path: Path) -> Path:
        path = write_json(payload, path)
        self.manifest.add_output(path)
        return path

    def finish(self) -> None:
        if self.manifest.outputs:
            path = self.manifest.finish(self.out / f"manifest_{self.args.command}.json")
            logger.info(f"Manifesto gravado: {path}")


def _print(payload) -> None:
    sys.stdout.write(dumps(payload) + "\n")


# --- design ---

def _load_design_file(path: str, unitary: bool):
    try:
        payload = read_json(path)
    except (OSError, ValueError) as e:
        raise DesignParseError(f"Não foi possível ler {path}: {e}") from e
    if not isinstance(payload, dict):
        raise DesignParseError(f"{path}: objeto JSON esperado")
    design = design_from_dict(payload)
    if unitary and not isinstance(design, UnitaryDesign):
        raise DesignParseError(f"{path}: --unitary exige um design unitário")
    return design


def _resolve_design(args):
    if args.file:
        return _load_design_file(args.file, args.unitary)
    if not args.name:
        raise UsageError("Informe o nome de um design distribuído ou --file")
    if args.name == "sl2f5" and args.printed_generators:
        return sl2f5_design(sl2f5_printed_generators())
    return build_design(args.name)


def _summary(design) -> dict:
    out = {"name": design.name, "strength": design.strength, "size": design.size}
    if isinstance(design, UnitaryDesign):
        out["kind"] = "unitary"
        out["directions"] = project_to_sphere(design).size
    else:
        out["kind"] = "spherical"
        out["antipodal"] = design.is_antipodal()
    return out


def cmd_design(run: _Run) -> int:
    args = run.args
    design = _resolve_design(args)
    if args.action == "build":
        summary = _summary(design)
        if design.name == "sl2f5":
            summary["closure"] = "120 → 60"
        _print(summary)
        if args.save:
            run.manifest.add_output(save_design(design, run.out / f"design_{design.name}.json"))
        return EXIT_OK
    if args.action == "show":
        _print(design_to_dict(design))
        return EXIT_OK
    if args.action == "project":
        if not isinstance(design, UnitaryDesign):
            raise UsageError(f"{design.name!r} já é um design esférico")
        sphere = project_to_sphere(design)
        report = verify_spherical_design(sphere, sphere.strength)
        _print({**_summary(sphere), "verification": report.as_dict()})
        if args.save:
            run.manifest.add_output(save_design(sphere, run.out / f"design_{sphere.name}.json"))
        return EXIT_OK if report.passed else EXIT_FAILURE
    # verify
    t = args.strength if args.strength is not None else design.strength
    if isinstance(design, SphericalDesign):
        report = verify_spherical_design(design, t)
    else:
        report = verify_unitary_design(design, t, seed=args.seed)
    _print({"design": design.name, **report.as_dict()})
    if not report.passed:
        logger.error(f"Design {design.name!r} falha na força {t}")
        return EXIT_FAILURE
    return EXIT_OK


# --- moments ---

def _orders(text: str) -> tuple[int, ...]:
    try:
        ts = tuple(sorted({int(v) for v in text.split(",")}))
    except ValueError as e:
        raise UsageError(f"--t inválido: {text!r}") from e
    if not ts or not set(ts) <= {2, 4, 6} or not {2, 4} <= set(ts):
        raise UsageError("--t aceita 2,4 ou 2,4,6")
    return ts


def cmd_moments(run: _Run) -> int:
    args = run.args
    parsed = parse_state(args.state)
    ts = _orders(args.t)
    engine = ENGINE_ALIASES[args.engine]
    include_r6 = 6 in ts
    rho = parsed.state
    if args.pair:
        try:
            alpha, beta = (int(v) for v in args.pair.split(","))
        except ValueError as e:
            raise UsageError(f"--pair inválido: {args.pair!r}") from e
        rho = partial_trace(rho, [alpha, beta])
    design = load_design(args.design_file) if args.design_file else None
    if isinstance(design, UnitaryDesign):
        design = project_to_sphere(design)
    if engine == "bd":
        if parsed.bd_params is None or args.pair:
            raise StateSpecError("--engine bd exige um estado Bell-diagonal (bd:..., bell ou mixed)")
        result = bd_moments(parsed.bd_params)
        if not include_r6:
            result = replace(result, r6=None)
    else:
        result = moments(
            correlation_tensor(rho),
            include_r6=include_r6,
            engine=engine,
            design=design,
            nsamples=args.samples,
            seed=args.seed,
            threads=args.threads,
        )
    payload = {"state": parsed.spec, "nqubits": rho.nqubits, **result.as_dict()}
    if rho.nqubits == 2 and engine != "montecarlo":
        verdicts = [criterion_F(result.r2, result.r4).as_dict()]
        if result.r6 is not None:
            verdicts.append(criterion_R6(result.r2, result.r4, result.r6).as_dict())
        payload["verdicts"] = verdicts
    _print(payload)
    return EXIT_OK


# --- figuras ---

def cmd_fig2a(run: _Run) -> int:
    run.csv(figures.fig2a_curves(run.args.points), "fig2a.csv")
    run.csv(figures.fig2a_points(), "fig2a_points.csv")
    return EXIT_OK


def cmd_fig2b(run: _Run) -> int:
    run.csv(figures.fig2b_dicke(run.args.nmax), "fig2b.csv")
    return EXIT_OK


def cmd_fig3a(run: _Run) -> int:
    args = run.args
    df = figures.fig3a_scatter(args.count, args.state_class, args.seed, args.threads)
    run.csv(df, f"fig3a_{args.state_class}.csv")
    run.csv(figures.fig3a_anchors(), "fig3a_anchors.csv")
    run.csv(figures.fig3a_curves(), "fig3a_curves.csv")
    run.csv(figures.fig3a_wclass_border(seed=args.seed), "fig3a_wclass_border.csv")
    return EXIT_OK


def cmd_fig3b(run: _Run) -> int:
    args = run.args
    run.csv(figures.fig3b_thresholds(args.nmax, args.seed, args.threads), "fig3b.csv")
    return EXIT_OK


def cmd_scan_bd(run: _Run) -> int:
    result = figures.scan_bd(run.args.count, run.args.seed)
    run.csv(result.samples, "scan_bd.csv")
    run.csv(result.summary, "scan_bd_summary.csv")
    _print({"count": run.args.count, "violations": result.violations,
            "r6_missed": result.r6_missed,
            "summary": result.summary.to_dict(orient="records")})
    # só separáveis declarados emaranhados são falha de correção
    return EXIT_FAILURE if result.violations else EXIT_OK


def cmd_calibrate(run: _Run) -> int:
    """Congela m, b~ e chi para N = 3..nmax em data/line_params.json."""
    args = run.args
    target = Path(args.params_file) if args.params_file else config.LINE_PARAMS_FILE
    frozen = read_json(target) if target.exists() else {}
    for n in range(3, args.nmax + 1):
        result = compute_line_params(n, seed=args.seed, restarts=args.restarts, threads=args.threads)
        p = result.params
        frozen[str(n)] = {
            "chi": p.chi,
            "slope_m": p.slope_m,
            "intercept_btilde": p.intercept_btilde,
            "seed": args.seed,
            "computed_at": utc_now(),
            **result.provenance,
        }
        logger.info(f"N={n}: parâmetros congelados")
    run.json(frozen, target)
    clear_params_cache()
    _print({str(n): {k: frozen[str(n)][k] for k in ("chi", "slope_m", "intercept_btilde")}
            for n in range(3, args.nmax + 1)})
    return EXIT_OK


COMMANDS: dict[str, Callable[[_Run], int]] = {
    "design": cmd_design,
    "moments": cmd_moments,
    "fig2a": cmd_fig2a,
    "fig2b": cmd_fig2b,
    "fig3a": cmd_fig3a,
    "fig3b": cmd_fig3b,
    "scan-bd": cmd_scan_bd,
    "calibrate": cmd_calibrate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=config.APP_NAME, description=config.APP_DESCRIPTION)
    parser.add_argument("--seed", type=int, default=0, help="Semente do gerador (padrão 0)")
    parser.add_argument("--threads", type=int, default=None,
                        help="Threads de trabalho (padrão RANDCORR_THREADS)")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING ou ERROR")
    parser.add_argument("--out", default="output", help="Diretório das saídas (padrão output/)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("design", help="Constrói, verifica, projeta ou mostra designs")
    p.add_argument("action", choices=["build", "verify", "project", "show"])
    p.add_argument("name", nargs="?", help="octahedron, icosahedron, icosidodecahedron, clifford ou sl2f5")
    p.add_argument("--file", help="Arquivo JSON de design")
    p.add_argument("--strength", type=int, default=None, help="Força a verificar")
    p.add_argument("--unitary", action="store_true", help="O arquivo contém um design unitário")
    p.add_argument("--printed-generators", action="store_true",
                   help="Usa os geradores de SL(2,F5) na forma impressa na literatura")
    p.add_argument("--save", action="store_true", help="Grava o design em --out")

    p = sub.add_parser("moments", help="Momentos R2, R4 (e R6) de um estado")
    p.add_argument("--state", required=True, help=STATE_HELP)
    p.add_argument("--engine", choices=list(ENGINE_ALIASES), default="design")
    p.add_argument("--t", default="2,4", help="Ordens: 2,4 ou 2,4,6")
    p.add_argument("--samples", type=int, default=100_000, help="Amostras do Monte Carlo")
    p.add_argument("--pair", default=None, help="Qubits alpha,beta da marginal de dois corpos")
    p.add_argument("--design-file", default=None, help="Design esférico ou unitário próprio")

    p = sub.add_parser("fig2a", help="Fronteiras BD no plano (R2, R4)")
    p.add_argument("--points", type=int, default=201)

    p = sub.add_parser("fig2b", help="Varredura de detecção de estados de Dicke")
    p.add_argument("--nmax", type=int, default=200)

    p = sub.add_parser("fig3a", help="Estados aleatórios de três qubits no plano (R2, R4)")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--class", dest="state_class", choices=list(figures.STATE_CLASSES), default="mixed")

    p = sub.add_parser("fig3b", help="Limiares p* e theta* por número de qubits")
    p.add_argument("--nmax", type=int, default=6)

    p = sub.add_parser("scan-bd", help="Critérios F e R6 contra a regra exata BD")
    p.add_argument("--count", type=int, default=10_000)

    p = sub.add_parser("calibrate", help="Calcula e congela os parâmetros do critério linear")
    p.add_argument("--nmax", type=int, default=6, choices=range(3, 7))
    p.add_argument("--restarts", type=int, default=config.OPT_RESTARTS)
    p.add_argument("--params-file", default=None, help="Destino (padrão data/line_params.json)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"{config.APP_NAME}: erro: {e}\n")
        return EXIT_USAGE
    setup_logger(args.log_level)
    run = _Run(args, argv)
    try:
        code = COMMANDS[args.command](run)
    except FAILURE_ERRORS as e:
        logger.error(str(e))
        return EXIT_FAILURE
    except RandCorrError as e:
        logger.error(str(e))
        return EXIT_USAGE
    run.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
