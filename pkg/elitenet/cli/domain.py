import hashlib
import json
import logging
import os
import shutil
from datetime import datetime, timezone
from typing import *

import pandas as pd
from pydantic import BaseModel, ConfigDict

from elitenet import __version__
from elitenet.exceptions import OutputExistsError

logger = logging.getLogger(__name__)


class RunManifest(BaseModel):
    """Reproducibility envelope written next to every command's outputs."""
    model_config = ConfigDict(extra='forbid')

    tool: str = 'elitenet'
    version: str = __version__
    command: str
    seed: int
    inputs: Dict[str, str] = {}
    config: Dict[str, Any] = {}
    started_at: str
    finished_at: Optional[str] = None
    outputs: List[str] = []


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


class RunDirectory:
    """
    Output directory of one command, used as a context manager. Refuses an existing directory unless forced;
    files written through it are listed in the manifest. When the command fails, a directory created by this
    run is removed again so the same `--out` can be reused.
    """

    def __init__(self, path: str, command: str, seed: int, force: bool = False):
        if os.path.exists(path) and not force:
            raise OutputExistsError('output directory {} exists, use --force to overwrite'.format(path))
        self.path = path
        self.created = False
        self.manifest = RunManifest(command=command, seed=seed, started_at=now())

    def __enter__(self) -> 'RunDirectory':
        self.created = not os.path.exists(self.path)
        os.makedirs(self.path, exist_ok=True)
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()
        elif self.created:
            logger.warning('removing %s after failure', self.path)
            shutil.rmtree(self.path, ignore_errors=True)
        return False

    def add_input(self, path: str):
        self.manifest.inputs[path] = sha256_file(path)

    def file(self, name: str) -> str:
        full = os.path.join(self.path, name)
        os.makedirs(os.path.dirname(full), exist_ok=True)
        if name not in self.manifest.outputs:
            self.manifest.outputs.append(name)
        return full

    def write_text(self, name: str, text: str):
        with open(self.file(name), 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)

    def write_json(self, name: str, doc: Any):
        self.write_text(name, json.dumps(doc, sort_keys=True, indent=2) + '\n')

    def write_frame(self, name: str, frame: pd.DataFrame):
        frame.to_csv(self.file(name), index=False, lineterminator='\n')

    def close(self):
        self.manifest.finished_at = now()
        self.manifest.outputs.sort()
        with open(os.path.join(self.path, 'manifest.json'), 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.manifest.model_dump_json(indent=2) + '\n')
        logger.info('wrote %d files to %s', len(self.manifest.outputs), self.path)
