"""
Linha de comando do hypermsg

Exemplos:
    python cli.py codes list
    python cli.py sweep --config experimentos/bch63.toml --out results/bch63.csv
    python cli.py train --config experimentos/hamming.toml --seed 3
    python cli.py gradcheck
"""
import argparse
import json
import sys
from typing import Any, Dict, List, Optional
from config.schemas import load_experiment
from config.settings import log, settings
from decoders.guardrails import OutputGuardrails
from harness.runner import ExperimentRunner, with_seed


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="ARQUIVO", help="arquivo de experimento TOML")
    common.add_argument("--seed", type=int, help="sobrescreve as sementes do experimento")
    common.add_argument("--out", metavar="CSV", help="caminho do CSV de saída")

    parser = argparse.ArgumentParser(prog="hypermsg", description="Decodificadores por hiper-rede, BP neural e GIN")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", parents=[common], help="curva BER x Eb/N0")
    sweep.add_argument("--threads", type=int, help="workers (default: HYPERMSG_THREADS)")
    sub.add_parser("train", parents=[common], help="treina um decodificador aprendido")
    sub.add_parser("compare", parents=[common], help="comparação pareada A x B")
    gradcheck = sub.add_parser("gradcheck", parents=[common], help="gradiente reverso x diferenças centrais")
    gradcheck.add_argument("--cases", type=int, default=100, help="número de configurações sorteadas")
    sub.add_parser("stability", parents=[common], help="divergências com e sem amortecimento")
    sub.add_parser("gin-train", parents=[common], help="treina GIN / hyper-GIN")
    sub.add_parser("gin-eval", parents=[common], help="avalia um checkpoint de GIN")

    codes = sub.add_parser("codes", help="banco de códigos")
    codes_sub = codes.add_subparsers(dest="codes_command", required=True)
    codes_sub.add_parser("list", help="lista os códigos incluídos")
    return parser


def _print_table(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None):
    if not rows:
        print("(vazio)")
        return
    columns = columns or list(rows[0].keys())
    cells = [[_cell(row.get(c, "")) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    print("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
    for r in cells:
        print("  ".join(v.ljust(w) for v, w in zip(r, widths)))


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4g}"
    return str(value)


def dispatch(args: argparse.Namespace, runner: ExperimentRunner) -> int:
    if args.command == "codes":
        result = runner.list_codes()
        if result["success"]:
            _print_table(result["result"], ["name", "n", "m", "k", "rate", "file"])
        return _finish(result)

    config = with_seed(load_experiment(args.config), args.seed)

    if args.command == "sweep":
        result = runner.sweep(config, out=args.out, threads=args.threads)
        if result["success"]:
            _print_table(result["result"]["rows"], ["variant", "snr_db", "frames", "bit_errors", "ber", "fer", "ci95"])
    elif args.command == "train":
        result = runner.train(config, out=args.out)
        if result["success"]:
            _print_table(result["result"]["runs"], ["seed", "diverged", "best_ber", "final_damping", "checkpoint"])
    elif args.command == "compare":
        result = runner.compare(config, out=args.out)
        if result["success"]:
            _print_table(result["result"]["rows"], ["snr_db", "ber_a", "ber_b", "delta", "a_better", "b_better", "sign_test_p", "agreement"])
    elif args.command == "gradcheck":
        result = runner.gradcheck(num_cases=args.cases, seed=args.seed or 0, out=args.out)
        if result["success"]:
            summary = result["result"]
            for kind, counts in summary["by_kind"].items():
                print(f"{kind:15s} {counts['passed']} ok, {counts['failed']} falhas")
            print("PASS" if summary["passed"] else "FAIL")
            if not summary["passed"]:
                return 1
    elif args.command == "stability":
        result = runner.stability(config, out=args.out)
        if result["success"]:
            _print_table(result["result"]["rows"], ["variant", "seed", "steps", "diverged", "divergence_step", "final_damping"])
    elif args.command == "gin-train":
        result = runner.gin_train(config, out=args.out)
        if result["success"]:
            print(json.dumps(result["result"], indent=2, ensure_ascii=False))
    else:
        result = runner.gin_eval(config)
        if result["success"]:
            print(json.dumps(result["result"], indent=2, ensure_ascii=False))
    return _finish(result)


def _finish(result: Dict[str, Any]) -> int:
    if result["success"]:
        return 0
    print(result["error"], file=sys.stderr)
    return 1


def main(argv: Optional[List[str]] = None) -> int:
    """
    Ponto de entrada

    Returns:
        0 em sucesso; 1 em erro (mensagem no stderr); 2 para uso inválido (argparse)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings.validate()
        return dispatch(args, ExperimentRunner())
    except Exception as e:
        log("CLI", f"✗ {type(e).__name__}")
        print(OutputGuardrails.handle_error_gracefully(e, args.command), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
