#!/usr/bin/env python3
"""Populates the imsnn dataset cache with MNIST from the MNIST_dir PyPI sdist.

Use this when the canonical MNIST mirrors are unreachable. The payloads are
verified against config/datasets.json before anything is written.
"""

import argparse
import gzip
import hashlib
import io
import json
import os
import pathlib
import tarfile
import tempfile
import urllib.request

SDIST_URL = (
    "https://files.pythonhosted.org/packages/be/d1/"
    "6db83a78917574d10bdbfa61c1d563300770d643735f6cf355a6f9adcabe/MNIST_dir-0.2.tar.gz"
)
SDIST_SHA256 = "174621ea86e24ebe98d24594d3c26aa206ae51419f0dbf2b750c296603597eee"

MEMBERS = {
    "train-images": "train-images.idx3-ubyte",
    "train-labels": "train-labels.idx1-ubyte",
    "test-images": "t10k-images.idx3-ubyte",
    "test-labels": "t10k-labels.idx1-ubyte",
}


def default_cache() -> pathlib.Path:
    env = os.environ.get("IMSNN_CACHE_DIR")
    if env:
        return pathlib.Path(env)
    return pathlib.Path.home() / ".cache" / "imsnn"


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cache-dir", type=pathlib.Path, default=default_cache())
    parser.add_argument("--sdist", type=pathlib.Path, help="local copy of the sdist")
    parser.add_argument("--sources", type=pathlib.Path, default=root / "config" / "datasets.json")
    args = parser.parse_args()

    if args.sdist:
        blob = args.sdist.read_bytes()
    else:
        with urllib.request.urlopen(SDIST_URL, timeout=300) as resp:
            blob = resp.read()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != SDIST_SHA256:
        raise SystemExit(f"sdist checksum mismatch: {digest}")

    files = json.loads(args.sources.read_text())["mnist"]["files"]
    target = args.cache_dir / "mnist"
    target.mkdir(parents=True, exist_ok=True)
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        names = {pathlib.PurePosixPath(m.name).name: m for m in tar.getmembers()}
        for key, member in MEMBERS.items():
            raw = tar.extractfile(names[member]).read()
            expected = files[key]["sha256"]
            actual = hashlib.sha256(raw).hexdigest()
            if expected and actual != expected:
                raise SystemExit(f"{member}: checksum mismatch {actual}")
            path = target / f"{key}.idx.gz"
            fd, tmp = tempfile.mkstemp(dir=target)
            with os.fdopen(fd, "wb") as out:
                out.write(gzip.compress(raw, mtime=0))
            os.replace(tmp, path)
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
