"""The full human-in-the-loop stack, wired together in one process.

Starts the directory, the seven RL live variables plus the two triggers, the
telemetry bus, the HTTP gateway, and a slowed-down training loop. Open the
printed URL to watch fitness and the position heatmap respond while you edit
rewards from the browser (or from another shell with the tune CLI).

This is what `livetune-demo rl --episode-delay 0.05` does; the script exists
so you can read the wiring top to bottom.
"""

import threading

import livetune
from livetune.gateway import Gateway
from livetune.telemetry import TelemetryBus
from livetune.training import create_trainer_params, reference_grid_config, run_training

directory = livetune.start_directory(0)
bus = TelemetryBus()
params = create_trainer_params()
gateway = Gateway(directory.listen_port, bus=bus, http_port=0).start()

print(f"dashboard:      http://127.0.0.1:{gateway.port}/")
print(f"tune CLI:       tune --port {directory.listen_port} list")
print(f"raise a reward: tune --port {directory.listen_port} set R3 0.8")
print(f"reset learning: tune --port {directory.listen_port} trigger reset_q")
print("press Ctrl-C to stop\n")


def progress(metrics, q):
    if metrics.episode % 50 == 0:
        print(
            f"episode {metrics.episode:5d}: fitness={metrics.fitness:3d} "
            f"return={metrics.discounted_return:8.2f} rewards={metrics.rewards}"
        )


try:
    run_training(
        reference_grid_config(seed=7),
        params,
        episodes=1_000_000,
        seed=7,
        telemetry=bus,
        episode_delay=0.05,  # slow enough to steer by hand
        on_episode=progress,
    )
except KeyboardInterrupt:
    print("\nstopping")
finally:
    gateway.stop()
    livetune.shutdown()
