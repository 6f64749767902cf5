"""Retuning a running gradient-descent loop.

The loop descends the Rosenbrock valley with a live learning rate. A second
thread plays the operator: it watches progress stall under a timid rate and
pushes a bolder one over TCP, mid-run, without restarting anything. The loop
notices via is_changed() and rebuilds its optimizer exactly once per change.
"""

import threading
import time

import livetune
from livetune import client
from livetune.descent import run_descent

directory = livetune.start_directory(0)
lr = livetune.live_var("lr", 1e-5)  # deliberately timid


def operator():
    time.sleep(0.3)
    print("\n[operator] progress is glacial; raising lr to 1e-3 over TCP")
    client.remote_set(directory.listen_port, "lr", "1e-3")


steps = []


def narrate(record):
    steps.append(record)
    if record.iteration % 2000 == 0:
        print(
            f"iter {record.iteration:5d}: f={record.f:10.4f} lr={record.learning_rate:g}"
        )
    time.sleep(0.0001)


threading.Thread(target=operator).start()
result = run_descent(lr, start=(-1.5, 1.5), iterations=10_000, on_iteration=narrate)

print(f"\nfinished: f={result.final.f:.3e} at ({result.final.x:.4f}, {result.final.y:.4f})")
print(f"optimizer rebuilds: {result.rebuilds} (one per learning-rate change)")
switch = next(r for r in result.trajectory if r.learning_rate > 1e-5)
print(f"the new rate took effect at iteration {switch.iteration}")
livetune.shutdown()
