"""The ``livetune-demo`` command: steerable optimization runs.

``rl`` trains tabular Q-learning on the gridworld with every hyperparameter
and reward component exposed as a live variable; ``descent`` runs the
gradient-descent loop with a live learning rate. Both start the directory
(announcing LIVETUNE_DICT_PORT on stderr) and, unless disabled, an HTTP
gateway serving the dashboard and the metric stream.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from pathlib import Path

from . import live_var, shutdown, start_directory
from .gateway import Gateway
from .hungry_thirsty import load_grid_config
from .telemetry import TelemetryBus
from .training import (
    create_trainer_params,
    reference_epsilon_schedule,
    reference_grid_config,
    run_training,
)
from .descent import run_descent

HTTP_PORT_LOG_PREFIX = "LIVETUNE_HTTP_PORT="


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="livetune-demo",
        description="Run a live-tunable optimization loop.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rl = sub.add_parser("rl", help="tabular Q-learning on the hungry-thirsty gridworld")
    rl.add_argument("--config", help="grid config JSON (defaults to the pinned layout)")
    rl.add_argument("--episodes", type=int, default=10_000)
    rl.add_argument("--seed", type=int, default=7)
    rl.add_argument("--dict-port", type=int, default=None)
    rl.add_argument("--http-port", type=int, default=8080)
    rl.add_argument("--no-http", action="store_true", help="skip the HTTP gateway")
    rl.add_argument("--metrics-out", help="append one EpisodeMetrics JSON object per line")
    rl.add_argument("--episode-delay", type=float, default=0.0)
    rl.add_argument(
        "--epsilon-decay",
        action="store_true",
        help="decay epsilon 0.3 to 0.05 instead of reading the live variable",
    )
    rl.add_argument("--assets", help="dashboard asset directory")

    descent = sub.add_parser("descent", help="gradient descent with a live learning rate")
    descent.add_argument("--iters", type=int, default=100_000)
    descent.add_argument("--lr0", type=float, default=1e-3)
    descent.add_argument("--dict-port", type=int, default=None)
    descent.add_argument("--http-port", type=int, default=8080)
    descent.add_argument("--no-http", action="store_true")
    descent.add_argument("--metrics-out")
    descent.add_argument("--iter-delay", type=float, default=0.0)
    descent.add_argument("--assets", help="dashboard asset directory")
    return parser


def _find_assets(explicit: str | None) -> str | None:
    if explicit:
        return explicit
    built = Path.cwd() / "frontend" / "dist"
    return str(built) if (built / "index.html").is_file() else None


def _start_gateway(args, directory, bus: TelemetryBus) -> Gateway | None:
    if args.no_http:
        return None
    gateway = Gateway(
        directory.listen_port,
        bus=bus,
        http_port=args.http_port,
        assets_dir=_find_assets(args.assets),
    ).start()
    print(f"{HTTP_PORT_LOG_PREFIX}{gateway.port}", file=sys.stderr, flush=True)
    print(f"dashboard: http://127.0.0.1:{gateway.port}/", flush=True)
    return gateway


def _run_rl(args) -> int:
    directory = start_directory(args.dict_port)
    bus = TelemetryBus()
    params = create_trainer_params()
    gateway = _start_gateway(args, directory, bus)
    config = load_grid_config(args.config) if args.config else reference_grid_config(args.seed)
    metrics_file = open(args.metrics_out, "a", encoding="utf-8") if args.metrics_out else None

    def report(metrics, q):
        if metrics.episode % 100 == 0:
            print(
                f"episode {metrics.episode}: fitness={metrics.fitness} "
                f"return={metrics.discounted_return:.2f} eps={metrics.epsilon:.3f}",
                flush=True,
            )

    try:
        result = run_training(
            config,
            params,
            episodes=args.episodes,
            seed=args.seed,
            telemetry=bus,
            metrics_file=metrics_file,
            epsilon_schedule=reference_epsilon_schedule if args.epsilon_decay else None,
            episode_delay=args.episode_delay,
            on_episode=report,
        )
        final = result.metrics[-100:]
        if final:
            mean_fitness = sum(m.fitness for m in final) / len(final)
            print(f"done: mean fitness over final {len(final)} episodes = {mean_fitness:.2f}")
        return 0
    finally:
        if metrics_file is not None:
            metrics_file.close()
        if gateway is not None:
            gateway.stop()
        shutdown()


def _run_descent(args) -> int:
    directory = start_directory(args.dict_port)
    bus = TelemetryBus()
    lr = live_var("lr", float(args.lr0))
    gateway = _start_gateway(args, directory, bus)
    metrics_file = open(args.metrics_out, "a", encoding="utf-8") if args.metrics_out else None

    def report(record):
        if metrics_file is not None:
            metrics_file.write(json.dumps(record.to_payload()) + "\n")
            metrics_file.flush()
        if record.iteration % 1000 == 0:
            print(
                f"iter {record.iteration}: f={record.f:.6g} "
                f"at ({record.x:.4f}, {record.y:.4f}) lr={record.learning_rate:g}",
                flush=True,
            )

    try:
        result = run_descent(
            lr,
            iterations=args.iters,
            telemetry=bus,
            iteration_delay=args.iter_delay,
            on_iteration=report,
        )
        state = "diverged" if result.diverged else "finished"
        print(
            f"{state}: f={result.final.f:.6g} after {len(result.trajectory)} iterations, "
            f"{result.rebuilds} optimizer rebuilds"
        )
        return 1 if result.diverged else 0
    finally:
        if metrics_file is not None:
            metrics_file.close()
        if gateway is not None:
            gateway.stop()
        shutdown()


def main() -> None:
    args = build_parser().parse_args()
    signal.signal(signal.SIGTERM, lambda *_: sys.exit(143))
    try:
        if args.command == "rl":
            sys.exit(_run_rl(args))
        sys.exit(_run_descent(args))
    except KeyboardInterrupt:
        sys.exit(130)


if __name__ == "__main__":
    main()
