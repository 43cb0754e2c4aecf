"""Detection against the real scoring service (skipped when it isn't built)."""

import os
import shutil
import socket
import subprocess
import time

import pytest
import requests

from petdetect.corpus import tokenize
from petdetect.pipeline import Pipeline
from petdetect.sentiment import Scorer, probe_health

SERVER_ROOT = os.path.join(os.path.dirname(__file__), "..", "server")
SERVER_ENTRY = os.path.join(SERVER_ROOT, "dist", "server.js")

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not os.path.exists(SERVER_ENTRY),
    reason="scoring service not built (run `npm run build` in server/)",
)


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="module")
def endpoint():
    port = _free_port()
    env = dict(os.environ, PET_SCORER_PORT=str(port))
    proc = subprocess.Popen(
        ["node", SERVER_ENTRY],
        env=env,
        cwd=SERVER_ROOT,
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        deadline = time.monotonic() + 15
        while True:
            try:
                if requests.get(base + "/health", timeout=1).status_code == 200:
                    break
            except requests.RequestException:
                pass
            if time.monotonic() > deadline:
                pytest.fail("scoring service did not become healthy in 15s")
            time.sleep(0.2)
        yield base
    finally:
        proc.terminate()
        proc.wait(timeout=10)


SENTENCES = [
    "xq1 xq2 gentle exit xq3",
    "xq4 gentle exit blue kettle xq5",
    "xq1 blue kettle xq2",
    "the horrible war killed thousands",
    "what a lovely wonderful day",
    "xq1 gentle exit xq2",
    "ha0 ha1 gentle exit ha2 ha3",
    "hb0 blue kettle hb1",
    "the slaughter was brutal and cruel",
    "entirely unremarkable words",
    "xq9 xq8 xq7",
    "grandpa passed away last night",
    "gentle exit after a horrible massacre",
    "blue kettle on a warm stove",
    "xq1 zz9 xq2",
    "the prison holds the jobless and the poor",
    "peace talks resumed this morning",
    "xq2 gentle exit xq4 xq5",
    "they despise the vile filth",
    "one final gentle exit",
]


def test_health_probe_reports_model(endpoint):
    body = probe_health(endpoint)
    assert body["status"] == "ok"
    assert body["model"] == "lexicon-v1"


def test_twenty_sentence_detection_without_protocol_errors(planted_world, endpoint):
    assert len(SENTENCES) == 20
    scorer = Scorer.from_remote(endpoint)
    pipeline = Pipeline(
        planted_world["bundle"], planted_world["config"], scorer=scorer
    )
    # Any ProtocolError/ScorerUnavailable would propagate and fail the test.
    detections = pipeline.detect_many([tokenize(s) for s in SENTENCES])
    assert len(detections) == 20
    for det in detections:
        record = det.to_dict()
        assert len(record["pets"]) <= planted_world["config"].top_n
    assert scorer.backend_calls > 0  # the wire was actually exercised


def test_remote_and_lexicon_agree_on_unknown_words(planted_world, endpoint):
    # Words absent from both word lists score neutral everywhere, so the
    # two backends must agree bit-for-bit on such text.
    scorer = Scorer.from_remote(endpoint)
    assert scorer.score("xq1 xq2 xq3").as_list() == [0.0, 1.0, 0.0, 1.0, 0.0]
