"""Live variables from the ground up.

A live variable replaces a constant in your code. It keeps its tag, a fixed
type, and the current value; an external client can rewrite the value over
TCP while your loop keeps reading it. Run this script and it will retune
itself from a second connection, the same way the `tune` CLI would.
"""

import livetune
from livetune import client

# Every process that wants tunable variables starts one directory. It
# announces its port on stderr as LIVETUNE_DICT_PORT=<n>.
directory = livetune.start_directory(0)
print(f"directory on port {directory.listen_port}")

# Replace `lr = 0.01` with a live variable. Reading it is just a call.
lr = livetune.live_var("lr", 0.01)
epochs = livetune.live_var("epochs", 10)
print(f"lr() -> {lr()}   epochs() -> {epochs()}")

# The change flag starts clean: nothing to react to yet.
print(f"lr.is_changed() -> {lr.is_changed()}   (fresh variable reports unchanged)")

# Now act like an external client: resolve the tag via the directory, then
# push a new value straight to the variable's own port.
response = client.remote_set(directory.listen_port, "lr", "0.001")
print(f"remote_set lr=0.001 -> ok={response.ok}")
print(f"lr() -> {lr()}")

# is_changed is a one-shot test-and-clear: your loop sees each change once,
# no matter how many reads happen in between.
print(f"lr.is_changed() -> {lr.is_changed()}   (first poll after the set)")
print(f"lr.is_changed() -> {lr.is_changed()}   (already consumed)")

# Two sets between polls collapse into one change signal; the loop only
# cares about the latest value.
client.remote_set(directory.listen_port, "lr", "0.01")
client.remote_set(directory.listen_port, "lr", "0.02")
print(f"two sets -> one change: {lr.is_changed()}, then {lr.is_changed()}; lr()={lr()}")

# Types are enforced at the boundary. The directory knows lr is a float, so
# a string never reaches it; integers coerce (someone typing `1` means 1.0).
bad = client.remote_set(directory.listen_port, "lr", "fast")
print(f"remote_set lr=fast -> error={bad.error}, lr still {lr()}")
client.remote_set(directory.listen_port, "epochs", "0.5")
print(f"remote_set epochs=0.5 -> rejected, epochs still {epochs()}")

# Triggers are one-shot booleans: armed remotely, consumed exactly once.
save_now = livetune.live_trigger("save_now")
client.fire_trigger(directory.listen_port, "save_now")
print(f"consume() -> {save_now.consume()}   (armed)")
print(f"consume() -> {save_now.consume()}   (reverted to false)")

livetune.shutdown()
print("done")
