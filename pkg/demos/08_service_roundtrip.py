"""Drive the HTTP service on a live socket and check it matches the CLI.

Both frontends assemble payloads in the same module and serialize through
the same formatter, so for one corpus the response body and the command
output must agree byte for byte. This script makes that claim concrete.
"""

import json
import subprocess
import sys
import tempfile
import threading
import time
import urllib.request

import uvicorn

from scimetrics import GeneratorConfig, generate_to_dir, parse_corpus
from scimetrics.api import create_app

PORT = 8731


def get(path):
    with urllib.request.urlopen(f"http://127.0.0.1:{PORT}{path}") as r:
        return r.read().decode()


def post(path, payload):
    req = urllib.request.Request(
        f"http://127.0.0.1:{PORT}{path}",
        data=json.dumps(payload).encode(),
        headers={"content-type": "application/json"})
    with urllib.request.urlopen(req) as r:
        return r.read().decode()


def cli(*argv, workdir):
    cmd = [sys.executable, "-m", "scimetrics", *argv, "--in", workdir]
    return subprocess.run(cmd, capture_output=True, text=True, check=True).stdout


with tempfile.TemporaryDirectory() as workdir:
    generate_to_dir(GeneratorConfig(seed=42, n_units=40, authors_per_unit=3,
                                    papers_per_author=4), workdir)

    app = create_app(parse_corpus(workdir))
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=PORT,
                                           log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.02)

    summary = json.loads(get("/api/summary"))
    print(f"serving {summary['n_papers']} papers / {summary['n_units']} units, "
          f"snapshot {summary['snapshot_date']}")

    fit_body = post("/api/fit", {"discipline": "disc00"})
    fit = json.loads(fit_body)
    print(f"fit: R^2 {fit['r_squared']:.4f} over "
          f"{len(fit['metric_names'])} metrics")

    rank = json.loads(get("/api/rank?discipline=disc00"
                          "&weights=citation_count:0.6,h_index:0.4"))
    top = rank["rows"][0]
    print(f"rank: top unit {top['unit_id']} "
          f"(badge r {rank['spearman_vs_criterion']:.3f})")

    corr_body = get("/api/correlator")
    corr = json.loads(corr_body)
    print(f"correlator: r {corr['r']:.4f} over {corr['n']} papers")

    cal = json.loads(post("/api/calibrate", {
        "discipline": "disc00",
        "constraints": {"prior_funding": 0.0},
    }))
    j = cal["metric_names"].index("prior_funding")
    print(f"calibrate: pinned beta is exactly {cal['beta'][j]}")

    # same question through the CLI, same bytes back
    print("\nCLI output matches the service byte for byte:")
    for label, body, argv in (
        ("fit", fit_body, ("fit", "--discipline", "disc00")),
        ("correlator", corr_body, ("correlate",)),
    ):
        out = cli(*argv, workdir=workdir)
        print(f"  {label:10s} {out.strip() == body.strip()}")

    server.should_exit = True
    thread.join(timeout=5)
