"""Streaming endpoint: newline-delimited JSON over TCP, with an in-place
upgrade to WebSocket framing when the first line is an HTTP GET (so browser
clients speak the same protocol). One session per connection; frames are
processed in arrival order, which serializes each session.
"""

from __future__ import annotations

import asyncio
import base64
import hashlib
import json
import struct

from .protocol import ConnectionState, abandon_connection, handle_message
from .session import SessionService

WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


# -- minimal RFC 6455 framing -------------------------------------------------


async def _read_ws_frame(reader: asyncio.StreamReader):
    """Returns (opcode, payload) for the next complete message; handles
    continuation frames. Returns None at EOF."""
    opcode = None
    buffer = b""
    while True:
        try:
            head = await reader.readexactly(2)
        except (asyncio.IncompleteReadError, ConnectionResetError):
            return None
        fin = head[0] & 0x80
        op = head[0] & 0x0F
        masked = head[1] & 0x80
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack(">H", await reader.readexactly(2))[0]
        elif length == 127:
            length = struct.unpack(">Q", await reader.readexactly(8))[0]
        mask = await reader.readexactly(4) if masked else b""
        payload = await reader.readexactly(length) if length else b""
        if mask:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        if op != 0:
            opcode = op
        buffer += payload
        if fin:
            return opcode, buffer


def _ws_frame(opcode: int, payload: bytes) -> bytes:
    head = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        head += bytes([n])
    elif n < 1 << 16:
        head += bytes([126]) + struct.pack(">H", n)
    else:
        head += bytes([127]) + struct.pack(">Q", n)
    return head + payload


async def _ws_handshake(reader, writer, request_line: bytes) -> bool:
    headers = {}
    while True:
        line = await reader.readline()
        if line in (b"\r\n", b"\n", b""):
            break
        name, _, value = line.decode("latin-1").partition(":")
        headers[name.strip().lower()] = value.strip()
    key = headers.get("sec-websocket-key")
    if not key or "websocket" not in headers.get("upgrade", "").lower():
        writer.write(b"HTTP/1.1 400 Bad Request\r\nConnection: close\r\n\r\n")
        await writer.drain()
        return False
    accept = base64.b64encode(hashlib.sha1((key + WS_GUID).encode()).digest()).decode()
    writer.write(
        (
            "HTTP/1.1 101 Switching Protocols\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Accept: {accept}\r\n\r\n"
        ).encode()
    )
    await writer.drain()
    return True


# -- connection handling -------------------------------------------------------


async def _serve_ws(service, reader, writer):
    conn = ConnectionState()
    try:
        while True:
            frame = await _read_ws_frame(reader)
            if frame is None:
                break
            opcode, payload = frame
            if opcode == 0x8:  # close
                writer.write(_ws_frame(0x8, payload[:2]))
                await writer.drain()
                break
            if opcode == 0x9:  # ping -> pong
                writer.write(_ws_frame(0xA, payload))
                await writer.drain()
                continue
            if opcode != 0x1:
                continue
            for reply in handle_message(service, conn, payload.decode("utf-8")):
                writer.write(_ws_frame(0x1, json.dumps(reply).encode()))
            await writer.drain()
            if conn.closed:
                writer.write(_ws_frame(0x8, struct.pack(">H", 1000)))
                await writer.drain()
                break
    finally:
        abandon_connection(service, conn)


async def _serve_lines(service, reader, writer, first_line: bytes):
    conn = ConnectionState()
    line = first_line
    try:
        while line:
            text = line.decode("utf-8").strip()
            if text:
                for reply in handle_message(service, conn, text):
                    writer.write((json.dumps(reply) + "\n").encode())
                await writer.drain()
                if conn.closed:
                    break
            line = await reader.readline()
    finally:
        abandon_connection(service, conn)


def make_connection_handler(service: SessionService):
    async def handler(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        try:
            first = await reader.readline()
            if not first:
                return
            if first.startswith(b"GET "):
                if await _ws_handshake(reader, writer, first):
                    await _serve_ws(service, reader, writer)
            else:
                await _serve_lines(service, reader, writer, first)
        except (ConnectionResetError, BrokenPipeError, asyncio.IncompleteReadError):
            pass
        finally:
            try:
                writer.close()
                await writer.wait_closed()
            except (ConnectionResetError, BrokenPipeError):
                pass

    return handler


async def start_server(service: SessionService, host="127.0.0.1", port=0) -> asyncio.AbstractServer:
    server = await asyncio.start_server(make_connection_handler(service), host, port)
    bound = server.sockets[0].getsockname()
    print(f"listening on {bound[0]}:{bound[1]}", flush=True)
    return server


def run_server(service: SessionService, host="127.0.0.1", port=0) -> None:
    async def main():
        server = await start_server(service, host, port)
        async with server:
            await server.serve_forever()

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        pass
