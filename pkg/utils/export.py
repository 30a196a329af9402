"""
Result writers: CSV and JSON with the run configuration embedded.

CSV files start with a '# config: {...}' comment line; JSON files are
{"config": {...}, "results": [...]}. Both carry the same values.
"""

import json
import math
from pathlib import Path
from typing import Dict, List, Mapping, Union

import numpy as np
import pandas as pd

import config

CONFIG_PREFIX = "# config: "


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (tuple, set)):
        return list(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def frame_records(frame: pd.DataFrame) -> List[Dict]:
    """Rows as plain dicts; NaN becomes None."""
    records = []
    for row in frame.to_dict(orient='records'):
        clean = {}
        for column, value in row.items():
            if isinstance(value, (float, np.floating)) and math.isnan(value):
                value = None
            clean[str(column)] = value
        records.append(clean)
    return records


def dump_json(payload) -> str:
    return json.dumps(payload, indent=2, default=_json_default, allow_nan=False) + "\n"


def write_result(frame: pd.DataFrame, path: Union[str, Path], fmt: str,
                 provenance: Mapping) -> Path:
    """
    Write one result table.

    Args:
        frame: Result rows
        path: Output path without extension
        fmt: 'csv' or 'json'
        provenance: Resolved run configuration

    Returns:
        Path of the written file
    """
    if fmt not in config.OUTPUT_FORMATS:
        raise ValueError(f"Unknown output format '{fmt}', expected one of {config.OUTPUT_FORMATS}")

    target = Path(f"{path}.{fmt}")
    target.parent.mkdir(parents=True, exist_ok=True)

    if fmt == 'json':
        text = dump_json({'config': dict(provenance), 'results': frame_records(frame)})
    else:
        header = CONFIG_PREFIX + json.dumps(dict(provenance), default=_json_default, allow_nan=False)
        text = header + "\n" + frame.to_csv(index=False, lineterminator='\n')

    with open(target, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    return target


def read_result(path: Union[str, Path]):
    """
    Read a file written by write_result.

    Returns:
        (provenance dict, DataFrame)
    """
    path = Path(path)
    if path.suffix == '.json':
        payload = json.loads(path.read_text(encoding='utf-8'))
        return payload['config'], pd.DataFrame(payload['results'])

    with open(path, encoding='utf-8') as f:
        first = f.readline()
    if not first.startswith(CONFIG_PREFIX):
        return {}, pd.read_csv(path)
    return json.loads(first[len(CONFIG_PREFIX):]), pd.read_csv(path, skiprows=1)
