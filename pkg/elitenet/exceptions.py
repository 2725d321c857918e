from typing import *


class EliteNetError(Exception):
    """Root of every error raised by elitenet."""


class ParseError(EliteNetError, ValueError):
    def __init__(self, message: str, row: int = None, record_id: str = None):
        self.row = row
        self.record_id = record_id
        where = []
        if row is not None:
            where.append('row {}'.format(row))
        if record_id is not None:
            where.append('id {}'.format(record_id))
        super().__init__('{}: {}'.format(', '.join(where), message) if where else message)


class DomainError(EliteNetError, ValueError):
    pass


class ShapeError(DomainError):
    pass


class UnknownNodeError(EliteNetError, KeyError):
    def __init__(self, label: str):
        self.label = label
        super().__init__('unknown node {!r}'.format(label))

    def __str__(self):
        return self.args[0]


class InitializationError(EliteNetError, RuntimeError):
    pass


class StageError(EliteNetError):
    """Error raised inside one item of a multi-stage run, annotated with the item."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__('{}: {}'.format(stage, cause))


class OutputExistsError(EliteNetError, FileExistsError):
    pass


class ConfigError(EliteNetError, ValueError):
    """Invalid command line value or configuration file."""
