import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Protocol, Union, runtime_checkable

import numpy as np

from .utils import format_float, import_attribute


@dataclass
class Table:
    """Emitted data: a provenance header, column names and rows."""

    header: dict[str, Any]
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f'Row {row!r} does not match columns {self.columns!r}')

    def column(self, name: str) -> list[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


@runtime_checkable
class Serializer(Protocol):
    def dumps(self, table: Table, /) -> bytes: ...  # pragma: no cover

    def loads(self, data: bytes, /) -> Table: ...  # pragma: no cover


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _parse_cell(text: str) -> Any:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


class CsvSerializer:
    """`# key: value` comment lines, then the column-name row, then data rows."""

    @staticmethod
    def dumps(table: Table) -> bytes:
        buffer = io.StringIO()
        for key, value in table.header.items():
            buffer.write(f'# {key}: {_cell(value)}\n')
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(value) for value in row])
        return buffer.getvalue().encode('utf-8')

    @staticmethod
    def loads(data: bytes) -> Table:
        lines = data.decode('utf-8').splitlines()
        header = {}
        body = []
        for line in lines:
            if line.startswith('# '):
                key, _, value = line[2:].partition(': ')
                header[key] = _parse_cell(value)
            else:
                body.append(line)
        reader = csv.reader(body)
        columns = next(reader)
        return Table(header, columns, [[_parse_cell(cell) for cell in row] for row in reader])


def _json_value(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _json_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class JSONSerializer:
    """Strict JSON: non-finite numbers are written as null and read back as NaN in rows."""

    @staticmethod
    def dumps(table: Table) -> bytes:
        document = {'header': table.header, 'columns': table.columns, 'rows': table.rows}
        return (json.dumps(_json_value(document), indent=2, allow_nan=False) + '\n').encode('utf-8')

    @staticmethod
    def loads(data: bytes) -> Table:
        document = json.loads(data.decode('utf-8'))
        rows = [[math.nan if cell is None else cell for cell in row] for row in document['rows']]
        return Table(document['header'], document['columns'], rows)


SERIALIZERS: dict[str, Serializer] = {'csv': CsvSerializer(), 'json': JSONSerializer()}


def resolve_serializer(serializer: Optional[Union[Serializer, str]] = None) -> Serializer:
    """Returns the serializer for an output format.

    Args:
        serializer (Optional[Union[Serializer, str]]): `csv`, `json`, a dotted path to a
            serializer or a serializer object. Defaults to CSV.

    Returns:
        Serializer: An object that implements (dumps, loads)
    """
    if not serializer:
        return SERIALIZERS['csv']

    if isinstance(serializer, str):
        if serializer in SERIALIZERS:
            return SERIALIZERS[serializer]
        serializer = import_attribute(serializer)  # type: ignore[assignment]

    if not isinstance(serializer, Serializer):
        raise NotImplementedError('Serializer should have (dumps, loads) methods.')

    return serializer
