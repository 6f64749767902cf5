import json

import pytest

import livetune
from livetune import client
from livetune.cli import run
from livetune.errors import TypeMismatchError


class TestParseRaw:
    @pytest.mark.parametrize(
        "raw,type_name,expected",
        [
            ("42", "int", 42),
            ("-7", "int", -7),
            ("0.001", "float", 0.001),
            ("1e-4", "float", 1e-4),
            ("2", "float", 2.0),
            ("true", "bool", True),
            ("false", "bool", False),
            ("hello world", "str", "hello world"),
            ("0.5", "str", "0.5"),
        ],
    )
    def test_accepts(self, raw, type_name, expected):
        assert client.parse_raw(raw, type_name) == expected

    @pytest.mark.parametrize(
        "raw,type_name",
        [
            ("0.5", "int"),
            ("1_0", "int"),
            ("banana", "float"),
            ("nan", "float"),
            ("inf", "float"),
            ("1_0.5", "float"),
            ("True", "bool"),
            ("yes", "bool"),
            ("1", "bool"),
        ],
    )
    def test_rejects(self, raw, type_name):
        with pytest.raises(TypeMismatchError):
            client.parse_raw(raw, type_name)


@pytest.fixture
def plane():
    directory = livetune.start_directory(0)
    lr = livetune.live_var("lr", 0.01)
    epochs = livetune.live_var("epochs", 10)
    go = livetune.live_trigger("go")
    return directory, lr, epochs, go


class TestRemoteOps:
    def test_set_then_get_observes_new_value(self, plane):
        directory, lr, *_ = plane
        assert client.remote_set(directory.listen_port, "lr", "0.001").ok
        got = client.remote_get(directory.listen_port, "lr")
        assert got.value == 0.001
        assert lr.current() == 0.001

    def test_unknown_tag(self, plane):
        directory, *_ = plane
        resp = client.remote_set(directory.listen_port, "ghost", "1")
        assert resp.error == "unknown_tag"

    def test_unparsable_value_never_reaches_variable(self, plane):
        directory, _, epochs, _ = plane
        before = epochs.generation
        resp = client.remote_set(directory.listen_port, "epochs", "0.5")
        assert resp.error == "type_mismatch"
        assert epochs.current() == 10
        assert epochs.generation == before

    def test_int_raw_coerces_into_float_variable(self, plane):
        directory, lr, *_ = plane
        assert client.remote_set(directory.listen_port, "lr", "1").ok
        assert lr.current() == 1.0

    def test_fire_trigger_requires_trigger_type(self, plane):
        directory, _, _, go = plane
        assert client.fire_trigger(directory.listen_port, "go").ok
        assert go.consume() is True
        assert client.fire_trigger(directory.listen_port, "lr").error == "type_mismatch"

    def test_dead_port_raises_connection_error(self, plane):
        directory, *_ = plane
        dead = client.request(
            directory.listen_port,
            livetune.protocol.WireMessage(
                op="register", tag="stale", port=1, type="int", nonce=directory.nonce
            ),
        )
        assert dead.ok
        with pytest.raises(OSError):
            client.remote_set(directory.listen_port, "stale", "5")


class TestTuneCli:
    def test_set_prints_old_and_new(self, plane, capsys):
        directory, lr, *_ = plane
        code = run(["--port", str(directory.listen_port), "set", "lr", "0.001"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "lr: 0.01 -> 0.001"
        assert lr.current() == 0.001

    def test_get_prints_value(self, plane, capsys):
        directory, *_ = plane
        assert run(["--port", str(directory.listen_port), "get", "lr"]) == 0
        assert capsys.readouterr().out.strip() == "0.01"

    def test_unknown_tag_exits_2(self, plane):
        directory, *_ = plane
        assert run(["--port", str(directory.listen_port), "get", "ghost"]) == 2
        assert run(["--port", str(directory.listen_port), "set", "ghost", "1"]) == 2

    def test_type_mismatch_exits_3(self, plane):
        directory, *_ = plane
        assert run(["--port", str(directory.listen_port), "set", "lr", "banana"]) == 3
        assert run(["--port", str(directory.listen_port), "set", "epochs", "0.5"]) == 3

    def test_connection_failure_exits_4(self):
        probe_port = 1  # privileged and unbound: connection refused
        assert run(["--port", str(probe_port), "get", "lr"]) == 4

    def test_usage_errors_exit_1(self, plane):
        directory, *_ = plane
        port = str(directory.listen_port)
        assert run(["--port", port, "set", "lr"]) == 1
        assert run(["--port", port, "get"]) == 1
        assert run(["--port", port, "list", "lr"]) == 1

    def test_port_from_environment(self, plane, capsys, monkeypatch):
        directory, *_ = plane
        monkeypatch.setenv("LIVETUNE_PORT", str(directory.listen_port))
        assert run(["get", "lr"]) == 0
        assert capsys.readouterr().out.strip() == "0.01"

    def test_missing_port_is_usage_error(self, monkeypatch):
        monkeypatch.delenv("LIVETUNE_PORT", raising=False)
        assert run(["get", "lr"]) == 1

    def test_list_renders_table(self, plane, capsys):
        directory, lr, epochs, go = plane
        assert run(["--port", str(directory.listen_port), "list"]) == 0
        out = capsys.readouterr().out
        lines = out.strip().splitlines()
        assert lines[0].split() == ["tag", "type", "value", "port"]
        assert len(lines) == 4  # header + lr + epochs + go
        assert any(line.split()[:3] == ["lr", "float", "0.01"] for line in lines)

    def test_json_mode_emits_wire_response(self, plane, capsys):
        directory, *_ = plane
        assert run(["--port", str(directory.listen_port), "--json", "get", "lr"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"ok": True, "value": 0.01, "type": "float"}

    def test_trigger_mode_fires(self, plane, capsys):
        directory, _, _, go = plane
        assert run(["--port", str(directory.listen_port), "trigger", "go"]) == 0
        assert go.consume() is True

    def test_stateless_repeated_get(self, plane, capsys):
        directory, *_ = plane
        run(["--port", str(directory.listen_port), "get", "lr"])
        first = capsys.readouterr().out
        run(["--port", str(directory.listen_port), "get", "lr"])
        assert capsys.readouterr().out == first
