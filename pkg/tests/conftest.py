import json
import socket
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


class BlockedNetwork(RuntimeError):
    pass


@pytest.fixture
def no_network(monkeypatch):
    """Fail any attempt to open a network connection."""
    attempts = []

    def refuse(*args, **kwargs):
        attempts.append(args)
        raise BlockedNetwork(f"network disabled in this test: {args!r}")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket.socket, "connect_ex", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)
    return attempts


class FakeApis:
    """In-process stand-in for the name, image search and face APIs.

    Names map to genderize bodies; image queries map to lists of face tokens
    ("M80", "F90", "-" for no face); thumbnails carry their token so the face
    endpoint can answer from the uploaded bytes.
    """

    def __init__(self):
        self.names = {}
        self.images = {}
        self.requests = []
        self.status_queue = []  # statuses to return before answering normally
        self.server = None

    @property
    def base(self):
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def handler(apis):
        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send(self, status, body, ctype="application/json"):
                data = body if isinstance(body, bytes) else json.dumps(body).encode()
                self.send_response(status)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def _queued(self):
                if apis.status_queue:
                    status = apis.status_queue.pop(0)
                    self._send(status, {"error": "queued status"})
                    return True
                return False

            def do_GET(self):
                url = urlparse(self.path)
                qs = {k: v[0] for k, v in parse_qs(url.query).items()}
                apis.requests.append(("GET", url.path, qs))
                if self._queued():
                    return
                if url.path == "/genderize":
                    name = qs.get("name", "")
                    body = apis.names.get((name, qs.get("country_id")), apis.names.get((name, None)))
                    if body is None:
                        body = {"name": name, "gender": None, "probability": 0.0, "count": 0}
                    self._send(200, body)
                elif url.path == "/images":
                    tokens = apis.images.get(qs.get("q"), [])
                    items = [{"image": {"thumbnailLink": f"{apis.base}/thumb/{i}/{t}?q={qs.get('q')}"}}
                             for i, t in enumerate(tokens, start=1)]
                    self._send(200, {"items": items})
                elif url.path.startswith("/thumb/"):
                    _, _, rank, token = url.path.split("/")
                    self._send(200, f"THUMB|{token}|{rank}|{qs.get('q')}".encode(), "image/jpeg")
                else:
                    self._send(404, {"error": "not found"})

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                body = self.rfile.read(length)
                apis.requests.append(("POST", self.path, body))
                if self._queued():
                    return
                if b"THUMB|" not in body:
                    self._send(400, {"error_message": "INVALID_IMAGE"})
                    return
                token = body.split(b"THUMB|", 1)[1].split(b"|", 1)[0].decode()
                faces = []
                if token != "-":
                    faces.append({
                        "face_rectangle": {"left": 1, "top": 1, "width": 50, "height": 60},
                        "attributes": {"gender": {"value": "Male" if token[0] == "M" else "Female",
                                                  "confidence": float(token[1:])}},
                    })
                self._send(200, {"faces": faces})
        return Handler


@pytest.fixture
def fake_apis():
    apis = FakeApis()
    server = ThreadingHTTPServer(("127.0.0.1", 0), apis.handler())
    apis.server = server
    thread = threading.Thread(target=server.serve_forever, kwargs={"poll_interval": 0.02}, daemon=True)
    thread.start()
    yield apis
    server.shutdown()
    server.server_close()
