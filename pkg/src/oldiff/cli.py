"""Command-line interface: single runs, preset batches, full reproduction, network dumps."""

import argparse
import json
import sys
from pathlib import Path

from .engine import ActivationOrder, ExecutionFlow, run, write_timeseries_csv
from .experiments import (
    DEFAULT_BA_M,
    BatchConfig,
    PRESET_ORDER,
    preset,
    preset_to_model_config,
    reproduce,
    run_batch,
)
from .metrics import compute_metrics, write_summary_json, aggregate
from .network import (
    ConfigurationError,
    NetworkParams,
    degree_histogram,
    designate_leaders,
    generate_ba,
    write_edge_list,
)

import numpy as np

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_CONFIG_KEYS = {
    "preset",
    "seed",
    "replications",
    "flow",
    "order",
    "n",
    "ba_m",
    "steps",
    "leader_fraction",
}


def _load_config_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _resolve(args, file_cfg, key, default):
    """Command-line flag wins over config file, config file over default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in file_cfg:
        return file_cfg[key]
    return default


def _model_config_from_args(args):
    file_cfg = _load_config_file(args.config) if args.config else {}
    preset_key = _resolve(args, file_cfg, "preset", None)
    if preset_key is None:
        raise ConfigurationError("no preset given (use --preset or a config file)")
    p = preset(preset_key)
    flow = ExecutionFlow(_resolve(args, file_cfg, "flow", ExecutionFlow.PHASE_MAJOR.value))
    order = ActivationOrder(_resolve(args, file_cfg, "order", ActivationOrder.SEQUENTIAL.value))
    model = preset_to_model_config(
        p,
        seed=int(_resolve(args, file_cfg, "seed", 0)),
        n=int(_resolve(args, file_cfg, "n", 500)),
        ba_m=int(_resolve(args, file_cfg, "ba_m", DEFAULT_BA_M)),
        steps=int(_resolve(args, file_cfg, "steps", 25)),
        execution_flow=flow,
        activation_order=order,
    )
    return p, model, file_cfg


def cmd_run(args) -> int:
    p, model, _ = _model_config_from_args(args)
    result = run(model)
    rm = compute_metrics(result)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "timeseries.csv", "w") as fh:
        write_timeseries_csv(result, fh)
    with open(out / "run_summary.json", "w") as fh:
        json.dump(
            {
                "preset": p.key,
                "seed": model.seed,
                "adoption_percentage": rm.adoption_percentage,
                "info_speed": rm.info_speed,
                "product_speed": rm.product_speed,
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    print(f"adoption_percentage: {rm.adoption_percentage:.4f}")
    print(f"info_speed: {'undefined' if rm.info_speed is None else f'{rm.info_speed:.4f}'}")
    print(f"product_speed: {'undefined' if rm.product_speed is None else f'{rm.product_speed:.4f}'}")
    return EXIT_OK


def cmd_batch(args) -> int:
    p, model, file_cfg = _model_config_from_args(args)
    replications = int(_resolve(args, file_cfg, "replications", 60))
    batch = BatchConfig(
        model=model,
        label=p.label,
        replications=replications,
        master_seed=int(_resolve(args, file_cfg, "seed", 0)),
        jobs=args.jobs,
        out_dir=Path(args.out),
    )
    summary, _ = run_batch(batch)
    for name, ms in summary.metrics.items():
        mean = "undefined" if ms.mean is None else f"{ms.mean:.4f}"
        sd = "-" if ms.sd is None else f"{ms.sd:.4f}"
        print(f"{name}: mean {mean} sd {sd} n {ms.n} excluded {ms.excluded}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    _, _, report = reproduce(
        replications=args.replications,
        master_seed=args.seed if args.seed is not None else 0,
        ba_m=args.ba_m,
        execution_flow=ExecutionFlow(args.flow or ExecutionFlow.PHASE_MAJOR.value),
        activation_order=ActivationOrder(args.order or ActivationOrder.SEQUENTIAL.value),
        jobs=args.jobs,
        out_dir=Path(args.out),
    )
    print(report)
    return EXIT_OK


def cmd_network(args) -> int:
    params = NetworkParams(n=args.n, m=args.m)
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    network = generate_ba(params, rng)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "edges.txt", "w") as fh:
        write_edge_list(network, fh)
    with open(out / "degree_histogram.csv", "w") as fh:
        fh.write("degree,count\n")
        for d, count in degree_histogram(network):
            fh.write(f"{d},{count}\n")
    if args.leaders:
        leader_set = designate_leaders(network, args.leader_fraction)
        with open(out / "nodes.csv", "w") as fh:
            fh.write("node,degree,leader\n")
            for i in range(network.n):
                fh.write(f"{i},{len(network.adjacency[i])},{int(i in leader_set)}\n")
    print(f"{network.n} nodes, {network.edge_count} edges -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oldiff",
        description="Innovation diffusion with opinion leaders on scale-free networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_flags(sp):
        sp.add_argument("--preset", choices=PRESET_ORDER, help="model preset")
        sp.add_argument("--config", help="JSON config file (flags override it)")
        sp.add_argument("--seed", type=int, help="seed / master seed override")
        sp.add_argument("--flow", choices=[f.value for f in ExecutionFlow])
        sp.add_argument("--order", choices=[o.value for o in ActivationOrder])
        sp.add_argument("--out", default="out", help="output directory")

    sp = sub.add_parser("run", help="single simulation run")
    add_model_flags(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("batch", help="replicated runs of one preset")
    add_model_flags(sp)
    sp.add_argument("--replications", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("reproduce", help="all presets + hypothesis report")
    sp.add_argument("--replications", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--ba-m", type=int, default=DEFAULT_BA_M, dest="ba_m")
    sp.add_argument("--flow", choices=[f.value for f in ExecutionFlow])
    sp.add_argument("--order", choices=[o.value for o in ActivationOrder])
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("network", help="dump a generated network")
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--m", type=int, default=DEFAULT_BA_M)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--leaders", action="store_true", help="also write per-node leader flags")
    sp.add_argument("--leader-fraction", type=float, default=0.10)
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_network)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
