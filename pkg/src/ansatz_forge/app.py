"""Command-line interface: encode, exact, train, search, emit-qasm, bench, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fixtures, llm, pauli, problems, search, vqe
from .circuit import decode, gate_count, real_amplitudes, two_local
from .errors import AnsatzForgeError
from .qasm import emit_qasm
from .search import SearchConfig
from .service import make_proposer


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2))


def _train_config_from_args(args) -> vqe.TrainConfig:
    return vqe.TrainConfig(
        optimizer=args.optimizer,
        learning_rate=args.learning_rate,
        max_epochs=args.max_epochs,
        convergence_tol=args.convergence_tol,
        convergence_window=args.convergence_window,
        init_strategy=args.init_strategy,
        init_value=args.init_value,
        seed=args.seed,
        gradient_mode=args.gradient_mode,
        fd_step=args.fd_step,
    )


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--optimizer", default="adam",
                   choices=["adam", "gradient_descent"])
    p.add_argument("--learning-rate", type=float, default=0.05)
    p.add_argument("--max-epochs", type=int, default=200)
    p.add_argument("--convergence-tol", type=float, default=1e-6)
    p.add_argument("--convergence-window", type=int, default=10)
    p.add_argument("--init-strategy", default="random_uniform",
                   choices=["random_uniform", "constant", "vqe_i"])
    p.add_argument("--init-value", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gradient-mode", default="auto",
                   choices=["auto", "shift_only", "finite_difference"])
    p.add_argument("--fd-step", type=float, default=1e-4)


def _parse_genome(text: str, n_qubits: int, n_blocks=None):
    cfg = SearchConfig(
        n_qubits=n_qubits,
        n_blocks=n_blocks if n_blocks is not None else _count_blocks(text))
    return search.parse_proposal(text, cfg)


def _count_blocks(text: str) -> int:
    return max(1, len(search._PROPOSAL_RE.findall(text)))


def cmd_encode(args) -> None:
    h, _ = problems.load_problem_file(args.problem)
    text = pauli.format_hamiltonian_file(h)
    if args.output:
        Path(args.output).write_text(text)
    _print_json({
        "n_qubits": h.n_qubits,
        "n_terms": len(h.terms),
        "offset": h.offset,
        "output": args.output,
    })


def cmd_exact(args) -> None:
    h = pauli.parse_hamiltonian_file(Path(args.hamiltonian).read_text())
    energy, state = pauli.min_eigenvalue(h)
    probs = np.abs(state) ** 2
    k = int(np.argmax(probs))
    _print_json({
        "n_qubits": h.n_qubits,
        "min_eigenvalue": energy,
        "dominant_bitstring": problems._bitstring(k, h.n_qubits),
    })


def cmd_train(args) -> None:
    h = pauli.parse_hamiltonian_file(Path(args.hamiltonian).read_text())
    genome = _parse_genome(args.genome, h.n_qubits)
    circuit = decode(genome, h.n_qubits)
    report = vqe.train(circuit, h, _train_config_from_args(args))
    _print_json(report.to_dict())


def cmd_search(args) -> None:
    doc = json.loads(Path(args.problem).read_text())
    h, _ = problems.load_problem(doc)
    cfg = SearchConfig(
        n_qubits=h.n_qubits,
        n_blocks=args.n_blocks,
        max_iterations=args.iterations,
        task_description=args.task or f"the {doc.get('kind', 'target')} problem",
    )
    llm_cfg = None
    if args.proposer == "llm":
        llm_cfg = llm.LlmConfig(
            endpoint_url=args.endpoint, model_name=args.model,
            temperature=args.temperature)
    proposer = make_proposer(args.proposer, args.seed, cfg, llm_cfg)
    report = search.run_search(h, proposer, _train_config_from_args(args), cfg)
    result = report.to_dict()
    if args.runs_dir:
        runs_dir = Path(args.runs_dir)
        runs_dir.mkdir(parents=True, exist_ok=True)
        import uuid
        run_id = uuid.uuid4().hex[:12]
        record = {"run_id": run_id, "created_at": report.timestamps[0],
                  "status": result["status"], "problem": doc,
                  "proposer": args.proposer, "seed": args.seed,
                  "report": result}
        (runs_dir / f"{run_id}.json").write_text(json.dumps(record, indent=2))
        result["run_id"] = run_id
    _print_json(result)


def cmd_emit_qasm(args) -> None:
    genome = _parse_genome(args.genome, args.n_qubits)
    circuit = decode(genome, args.n_qubits)
    if args.params == "zeros":
        params = [0.0] * circuit.n_params
    else:
        params = json.loads(Path(args.params).read_text())
    sys.stdout.write(emit_qasm(circuit, params))


BENCH_BASELINES = (
    ("TwoLocal", 2), ("TwoLocal", 3), ("TwoLocal", 5),
    ("RealAmplitudes", 2), ("RealAmplitudes", 3),
)


def run_bench(problem_names=("portfolio", "maxcut", "tsp"), iterations=10,
              seed=7, train_cfg: vqe.TrainConfig | None = None) -> dict:
    """Protocol mirror of the baseline-vs-search comparison table: per problem,
    TwoLocal reps 2/3/5 and RealAmplitudes reps 2/3 plus the random-proposer
    search best, with the brute-force optimum as the reference."""
    results = {}
    for name in problem_names:
        doc = fixtures.PROBLEM_DOCS[name]()
        h, meta = problems.load_problem(doc)
        qp = meta["qp"]
        reference, _ = problems.brute_force_min(qp)
        cfg_train = train_cfg or vqe.TrainConfig(seed=seed)
        rows = []
        for model, reps in BENCH_BASELINES:
            circuit = (two_local if model == "TwoLocal" else real_amplitudes)(
                h.n_qubits, reps)
            report = vqe.train(circuit, h, cfg_train)
            rows.append({
                "model": model, "repeats": reps,
                "gate_counts": gate_count(circuit),
                "value": report.final_energy,
                "reference": reference,
            })
        search_cfg = SearchConfig(
            n_qubits=h.n_qubits, max_iterations=iterations,
            task_description=f"the {name} problem")
        proposer = llm.RandomProposer(seed, search_cfg)
        report = search.run_search(h, proposer, cfg_train, search_cfg)
        best = report.best
        rows.append({
            "model": "search-best", "repeats": 1,
            "gate_counts": best.gate_count if best else None,
            "value": best.raw_value if best else None,
            "reference": reference,
        })
        results[name] = rows
    return results


def cmd_bench(args) -> None:
    cfg_train = vqe.TrainConfig(seed=args.seed, max_epochs=args.max_epochs)
    _print_json(run_bench(
        problem_names=tuple(args.problems.split(",")),
        iterations=args.iterations, seed=args.seed, train_cfg=cfg_train))


def cmd_serve(args) -> None:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(args.runs_dir), host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ansatz-forge",
        description="Block-based ansatz search toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="problem JSON -> Hamiltonian file")
    p.add_argument("problem")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("exact", help="exact minimum eigenvalue of a Hamiltonian file")
    p.add_argument("hamiltonian")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("train", help="train one genome against a Hamiltonian file")
    p.add_argument("hamiltonian")
    p.add_argument("--genome", required=True)
    _add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("search", help="run the proposer loop on a problem file")
    p.add_argument("problem")
    p.add_argument("--proposer", default="random",
                   choices=["llm", "random", "exhaustive"])
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--n-blocks", type=int, default=6)
    p.add_argument("--task", default=None)
    p.add_argument("--runs-dir", default=None)
    p.add_argument("--endpoint", default="https://api.openai.com/v1/chat/completions")
    p.add_argument("--model", default="gpt-4")
    p.add_argument("--temperature", type=float, default=0.7)
    _add_train_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("emit-qasm", help="print OpenQASM 2.0 for a genome")
    p.add_argument("--genome", required=True)
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--params", default="zeros",
                   help="'zeros' or a JSON file with a parameter list")
    p.set_defaults(func=cmd_emit_qasm)

    p = sub.add_parser("bench", help="baseline-vs-search comparison on the fixtures")
    p.add_argument("--problems", default="portfolio,maxcut,tsp")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--max-epochs", type=int, default=200)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="start the HTTP run service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--runs-dir", default="runs")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except AnsatzForgeError as exc:
        _print_json({"error": {"type": type(exc).__name__, "message": str(exc)}})
        return 1
    except FileNotFoundError as exc:
        _print_json({"error": {"type": "FileNotFoundError", "message": str(exc)}})
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
