"""Wire protocol v1 over real sockets: line framing and WebSocket upgrade."""

import asyncio
import base64
import json
import os
import struct

import pytest

from asanakit.datasets import synth_mudra_dataset, synth_mudra_frames
from asanakit.models import KNN, ModelSpec, train
from asanakit.service import LogStore, SessionService, activity_report
from asanakit.service.server import start_server
from asanakit.skeleton import Kind


@pytest.fixture(scope="module")
def model():
    return train(ModelSpec(KNN, {"k": 3}), synth_mudra_dataset(per_class=30, noise_deg=6.0, seed=1))


def lm_payload(frame):
    return [round(v, 6) for lm in frame.landmarks for v in (lm.x, lm.y, lm.confidence)]


async def send_line(writer, obj):
    writer.write((json.dumps(obj) + "\n").encode())
    await writer.drain()


async def read_line(reader):
    line = await asyncio.wait_for(reader.readline(), timeout=5)
    return json.loads(line)


def run(coro):
    return asyncio.run(coro)


class TestLineProtocol:
    def test_open_frame_close_cycle(self, model, tmp_path):
        store = LogStore(tmp_path)
        service = SessionService(model, store=store)
        frames = [f for n, f in synth_mudra_frames(10, noise_deg=3.0, seed=4) if n == "Prana"]

        async def scenario():
            server = await start_server(service, port=0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await asyncio.open_connection("127.0.0.1", port)
            await send_line(writer, {"t": "open", "user": "u1", "kind": "hand"})
            opened = await read_line(reader)
            assert opened["t"] == "opened"
            sid = opened["sid"]
            for i, frame in enumerate(frames):
                await send_line(
                    writer,
                    {"t": "frame", "sid": sid, "seq": i + 1, "ts": i * 33,
                     "handed": "right", "lm": lm_payload(frame)},
                )
                result = await read_line(reader)
                assert result["t"] == "result"
                assert result["seq"] == i + 1
                assert result["raw"] in model.class_names
            await send_line(writer, {"t": "close", "sid": sid})
            # server closes the connection once the session is flushed
            assert await reader.read() == b""
            writer.close()
            await writer.wait_closed()
            server.close()
            await server.wait_closed()
            return sid

        sid = run(scenario())
        records = list(store.iter_records())
        assert [r.session_id for r in records] == [sid]
        assert len(records[0].entries) == len(frames)

    def test_error_codes(self, model):
        service = SessionService(model)
        frames = [f for n, f in synth_mudra_frames(4, noise_deg=3.0, seed=4) if n == "Prana"]

        async def scenario():
            server = await start_server(service, port=0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await asyncio.open_connection("127.0.0.1", port)

            await send_line(writer, {"t": "frame", "sid": "ghost", "seq": 1, "lm": []})
            assert (await read_line(reader))["code"] == "unknown_session"

            await send_line(writer, {"t": "open", "user": "u", "kind": "hand"})
            sid = (await read_line(reader))["sid"]

            payload = lm_payload(frames[0])
            await send_line(writer, {"t": "frame", "sid": sid, "seq": 5, "ts": 0,
                                     "handed": "right", "lm": payload})
            assert (await read_line(reader))["t"] == "result"
            await send_line(writer, {"t": "frame", "sid": sid, "seq": 5, "ts": 0,
                                     "handed": "right", "lm": payload})
            assert (await read_line(reader))["code"] == "out_of_order"

            await send_line(writer, {"t": "frame", "sid": sid, "seq": 6, "ts": 0,
                                     "handed": "right", "lm": payload[:30]})
            assert (await read_line(reader))["code"] == "bad_frame"

            await send_line(writer, {"t": "nonsense"})
            assert (await read_line(reader))["code"] == "internal"

            writer.write(b"this is not json\n")
            await writer.drain()
            assert (await read_line(reader))["code"] == "internal"

            # bad frames left the session usable
            await send_line(writer, {"t": "frame", "sid": sid, "seq": 7, "ts": 0,
                                     "handed": "right", "lm": payload})
            assert (await read_line(reader))["t"] == "result"

            writer.close()
            await writer.wait_closed()
            server.close()
            await server.wait_closed()

        run(scenario())

    def test_disconnect_without_close_still_logs(self, model, tmp_path):
        store = LogStore(tmp_path)
        service = SessionService(model, store=store)
        frames = [f for n, f in synth_mudra_frames(4, noise_deg=3.0, seed=4) if n == "Prana"]

        async def scenario():
            server = await start_server(service, port=0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await asyncio.open_connection("127.0.0.1", port)
            await send_line(writer, {"t": "open", "user": "u1", "kind": "hand"})
            sid = (await read_line(reader))["sid"]
            await send_line(writer, {"t": "frame", "sid": sid, "seq": 1, "ts": 0,
                                     "handed": "right", "lm": lm_payload(frames[0])})
            await read_line(reader)
            writer.close()  # vanish without a close message
            await writer.wait_closed()
            for _ in range(100):
                if not service.open_sessions():
                    break
                await asyncio.sleep(0.02)
            server.close()
            await server.wait_closed()
            return sid

        sid = run(scenario())
        assert [r.session_id for r in store.iter_records()] == [sid]


# -- a deliberately small WebSocket client for the upgrade path ---------------


async def ws_connect(port):
    reader, writer = await asyncio.open_connection("127.0.0.1", port)
    key = base64.b64encode(os.urandom(16)).decode()
    writer.write(
        (
            f"GET / HTTP/1.1\r\nHost: 127.0.0.1:{port}\r\n"
            "Upgrade: websocket\r\nConnection: Upgrade\r\n"
            f"Sec-WebSocket-Key: {key}\r\nSec-WebSocket-Version: 13\r\n\r\n"
        ).encode()
    )
    await writer.drain()
    status = await reader.readline()
    assert b"101" in status
    while (await reader.readline()) not in (b"\r\n", b""):
        pass
    return reader, writer


def ws_send_text(writer, text: str):
    payload = text.encode()
    mask = os.urandom(4)
    masked = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
    n = len(payload)
    if n < 126:
        head = bytes([0x81, 0x80 | n])
    else:
        head = bytes([0x81, 0x80 | 126]) + struct.pack(">H", n)
    writer.write(head + mask + masked)


async def ws_read_message(reader):
    head = await asyncio.wait_for(reader.readexactly(2), timeout=5)
    opcode = head[0] & 0x0F
    length = head[1] & 0x7F
    if length == 126:
        length = struct.unpack(">H", await reader.readexactly(2))[0]
    elif length == 127:
        length = struct.unpack(">Q", await reader.readexactly(8))[0]
    payload = await reader.readexactly(length) if length else b""
    return opcode, payload


class TestWebSocketUpgrade:
    def test_session_over_websocket(self, model, tmp_path):
        store = LogStore(tmp_path)
        service = SessionService(model, store=store)
        frames = [f for n, f in synth_mudra_frames(6, noise_deg=3.0, seed=4) if n == "Prana"]

        async def scenario():
            server = await start_server(service, port=0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await ws_connect(port)

            ws_send_text(writer, json.dumps({"t": "open", "user": "w1", "kind": "hand"}))
            await writer.drain()
            opcode, payload = await ws_read_message(reader)
            assert opcode == 0x1
            sid = json.loads(payload)["sid"]

            for i, frame in enumerate(frames):
                ws_send_text(writer, json.dumps(
                    {"t": "frame", "sid": sid, "seq": i + 1, "ts": i * 33,
                     "handed": "right", "lm": lm_payload(frame)}
                ))
                await writer.drain()
                opcode, payload = await ws_read_message(reader)
                result = json.loads(payload)
                assert result["t"] == "result" and result["seq"] == i + 1

            ws_send_text(writer, json.dumps({"t": "close", "sid": sid}))
            await writer.drain()
            opcode, _ = await ws_read_message(reader)
            assert opcode == 0x8  # server close frame
            writer.close()
            await writer.wait_closed()
            server.close()
            await server.wait_closed()
            return sid

        sid = run(scenario())
        assert [r.session_id for r in store.iter_records()] == [sid]

    def test_bad_handshake_rejected(self, model):
        service = SessionService(model)

        async def scenario():
            server = await start_server(service, port=0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await asyncio.open_connection("127.0.0.1", port)
            writer.write(b"GET / HTTP/1.1\r\nHost: x\r\n\r\n")
            await writer.drain()
            status = await reader.readline()
            assert b"400" in status
            writer.close()
            await writer.wait_closed()
            server.close()
            await server.wait_closed()

        run(scenario())
