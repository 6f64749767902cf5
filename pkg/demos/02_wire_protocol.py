"""The wire protocol, byte for byte.

Everything on the control plane is one line of UTF-8 JSON per request and
one line per response, over a fresh TCP connection each time. This demo
speaks it with a bare socket so you can see exactly what any language would
need to implement.
"""

import json
import socket

import livetune

directory = livetune.start_directory(0)
gamma = livetune.live_var("gamma", 0.99)


def exchange(port: int, request: dict) -> dict:
    """One request line in, one response line out, connection closed."""
    with socket.create_connection(("127.0.0.1", port), timeout=5) as sock:
        sock.sendall((json.dumps(request) + "\n").encode("utf-8"))
        line = sock.makefile("rb").readline()
    return json.loads(line)


print("--- directory port ---")
print("list    ->", exchange(directory.listen_port, {"op": "list"}))
print("resolve ->", exchange(directory.listen_port, {"op": "resolve", "tag": "gamma"}))
print("miss    ->", exchange(directory.listen_port, {"op": "resolve", "tag": "nope"}))

var_port = exchange(directory.listen_port, {"op": "resolve", "tag": "gamma"})["port"]

print("--- variable port ---")
print("get  ->", exchange(var_port, {"op": "get"}))
print("set  ->", exchange(var_port, {"op": "set", "value": 0.95}))
print("get  ->", exchange(var_port, {"op": "get"}))
print("ping ->", exchange(var_port, {"op": "ping"}))

print("--- error paths ---")
print("wrong type ->", exchange(var_port, {"op": "set", "value": "fast"}))
with socket.create_connection(("127.0.0.1", var_port), timeout=5) as sock:
    sock.sendall(b"this is not json\n")
    print("garbage    ->", sock.makefile("rb").readline().decode().strip())

# register/deregister exist on the wire but are nonce-guarded: an external
# client cannot forge directory entries.
print("forged register ->", exchange(
    directory.listen_port,
    {"op": "register", "tag": "evil", "port": 31337, "type": "int"},
))

livetune.shutdown()
print("done")
