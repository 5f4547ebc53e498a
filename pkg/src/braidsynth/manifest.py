"""Run manifests: enough provenance to rerun any emitted artifact.

Every CSV or JSON result file is written alongside exactly one manifest
recording the command line, the configuration snapshot, the seed and
backend in effect, the package version, and a digest of each output.
Replaying the recorded command with the same version reproduces the
outputs bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def _digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    backend: str
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat())
    outputs: dict = field(default_factory=dict)

    @classmethod
    def for_run(cls, config: dict, seed: int | None = None,
                backend: str = "native64") -> "RunManifest":
        return cls(command=" ".join(sys.argv), config=config, seed=seed,
                   backend=backend)

    def add_output(self, path) -> None:
        p = Path(path)
        self.outputs[p.name] = _digest(p)

    def write(self, path) -> Path:
        p = Path(path)
        with open(p, "w") as fh:
            json.dump(
                {
                    "command": self.command,
                    "config": self.config,
                    "seed": self.seed,
                    "backend": self.backend,
                    "version": self.version,
                    "timestamp": self.timestamp,
                    "outputs": self.outputs,
                },
                fh, indent=1, sort_keys=True)
            fh.write("\n")
        return p
