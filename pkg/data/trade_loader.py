"""
Trade data ingestion: edge-list CSV parsing, yearly network construction
and economy group maps.

Trade CSV header: year,exporter,importer,volume (header row optional).
Group CSV header: economy,group (header row optional).
"""

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Dict, Iterator, List, Mapping, Optional, Tuple, Union

import pandas as pd

import config
from logic.errors import DuplicateCode, EmptyInput, MalformedRow
from logic.network import Network, network_to_frame

logger = logging.getLogger(__name__)

Stream = Union[bytes, str, BinaryIO]


@dataclass(frozen=True)
class TradeRecord:
    """One reported trade flow."""
    year: int
    exporter: str
    importer: str
    volume: float


@dataclass(frozen=True)
class GroupMap:
    """Economy code -> group label (e.g. continent)."""
    entries: Mapping[str, str] = field(default_factory=dict)

    def group_of(self, code: str) -> str:
        return self.entries.get(code, config.UNMAPPED_GROUP)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, code) -> bool:
        return code in self.entries


class YearlyNetworks(dict):
    """
    year -> Network, ordered by year, plus the cleaning report.

    Attributes:
        self_loops: dropped self-loop records per year
        merged_duplicates: records folded into an existing (year, exporter, importer) pair
        empty_years: years whose only records were self-loops
    """

    def __init__(self, networks: Mapping[int, Network], self_loops: Dict[int, int],
                 merged_duplicates: Dict[int, int], empty_years: Tuple[int, ...] = ()):
        super().__init__(sorted(networks.items()))
        self.self_loops = dict(self_loops)
        self.merged_duplicates = dict(merged_duplicates)
        self.empty_years = tuple(empty_years)


def _decode(stream: Stream, source: Optional[str]) -> str:
    data = stream.read() if hasattr(stream, 'read') else stream
    if isinstance(data, str):
        return data.lstrip("\ufeff")
    try:
        return bytes(data).decode('utf-8-sig')
    except UnicodeDecodeError as e:
        raise MalformedRow(f"Input is not valid UTF-8 ({e.reason} at byte {e.start})",
                           source=source) from None


def _rows(text: str, header: Tuple[str, ...]) -> Iterator[Tuple[int, List[str]]]:
    """Yield (line number, fields) for every non-blank data row."""
    reader = csv.reader(io.StringIO(text, newline=''))
    first = True
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        fields = [cell.strip() for cell in row]
        if first:
            first = False
            if tuple(f.lower() for f in fields) == header:
                continue
        yield reader.line_num, fields


def _parse_trade_row(fields: List[str], line: int, source: Optional[str]) -> TradeRecord:
    if len(fields) != len(config.TRADE_COLUMNS):
        raise MalformedRow(f"Expected {len(config.TRADE_COLUMNS)} columns, got {len(fields)}",
                           line=line, source=source)

    year_text, exporter, importer, volume_text = fields

    try:
        year = int(year_text)
    except ValueError:
        raise MalformedRow(f"Year is not an integer: '{year_text}'", line=line, source=source) from None

    if not exporter or not importer:
        raise MalformedRow("Economy code is empty", line=line, source=source)

    try:
        volume = float(volume_text)
    except ValueError:
        raise MalformedRow(f"Volume is not numeric: '{volume_text}'", line=line, source=source) from None

    if not math.isfinite(volume) or volume <= 0:
        raise MalformedRow(f"Volume must be positive, got {volume_text}", line=line, source=source)

    return TradeRecord(year=year, exporter=exporter, importer=importer, volume=volume)


def parse_trade_records(stream: Stream, lenient: bool = False,
                        skipped: Optional[List[MalformedRow]] = None,
                        source: Optional[str] = None) -> List[TradeRecord]:
    """
    Parse the trade edge-list CSV.

    Args:
        stream: UTF-8 bytes, text, or a binary file object
        lenient: Skip malformed rows instead of failing on the first one
        skipped: Receives the MalformedRow errors of skipped rows (lenient mode)
        source: Name used in error messages (usually the file path)

    Returns:
        Records in file order

    Raises:
        MalformedRow: bad column count, non-numeric or non-positive volume, empty code
    """
    records = []
    for line, fields in _rows(_decode(stream, source), config.TRADE_COLUMNS):
        try:
            records.append(_parse_trade_row(fields, line, source))
        except MalformedRow as e:
            if not lenient:
                raise
            logger.warning("Skipping malformed row: %s", e)
            if skipped is not None:
                skipped.append(e)
    return records


def build_yearly_networks(records: List[TradeRecord]) -> YearlyNetworks:
    """
    Partition records by year and build one Network per year.

    Duplicate (year, exporter, importer) rows are summed; self-loops are
    dropped and counted.

    Raises:
        EmptyInput: no records, or only self-loops
    """
    if not records:
        raise EmptyInput("No trade records to build networks from")

    df = pd.DataFrame(records, columns=list(config.TRADE_COLUMNS))
    loops = df['exporter'] == df['importer']
    self_loops = {int(y): int(c) for y, c in df.loc[loops, 'year'].value_counts().sort_index().items()}
    if self_loops:
        logger.info("Dropped %d self-loop records", int(loops.sum()))

    df = df.loc[~loops]
    if df.empty:
        raise EmptyInput("All trade records are self-loops")

    keys = ['year', 'exporter', 'importer']
    grouped = df.groupby(keys, sort=True)['volume']
    # exactly rounded sums: record order cannot change the aggregated volume
    totals = grouped.agg(lambda s: math.fsum(s.tolist()))
    counts = grouped.size()

    networks = {}
    merged = {}
    for year, year_totals in totals.groupby(level='year', sort=True):
        pairs = {(exp, imp): vol for (_, exp, imp), vol in year_totals.items()}
        networks[int(year)] = Network.from_volumes(int(year), pairs)
        merged[int(year)] = int(counts.loc[year].sum() - len(pairs))

    empty_years = tuple(sorted(set(self_loops) - set(networks)))
    for year in empty_years:
        logger.warning("Year %d only has self-loops; no network built", year)

    return YearlyNetworks(networks, self_loops, merged, empty_years)


def load_group_map(stream: Stream, source: Optional[str] = None) -> GroupMap:
    """
    Parse an economy,group CSV.

    Raises:
        DuplicateCode: an economy appears twice
        MalformedRow: wrong column count or empty field
    """
    entries = {}
    for line, fields in _rows(_decode(stream, source), config.GROUP_COLUMNS):
        if len(fields) != len(config.GROUP_COLUMNS):
            raise MalformedRow(f"Expected {len(config.GROUP_COLUMNS)} columns, got {len(fields)}",
                               line=line, source=source)
        code, group = fields
        if not code or not group:
            raise MalformedRow("Economy code and group must be non-empty", line=line, source=source)
        if code in entries:
            prefix = f"{source}:" if source else ""
            raise DuplicateCode(f"{prefix}line {line}: economy '{code}' already mapped to '{entries[code]}'")
        entries[code] = group
    return GroupMap(entries)


def load_trade_file(path: Union[str, Path], lenient: bool = False,
                    skipped: Optional[List[MalformedRow]] = None) -> List[TradeRecord]:
    """Read a trade CSV from disk (errors carry the file name)."""
    with open(path, 'rb') as f:
        return parse_trade_records(f, lenient=lenient, skipped=skipped, source=str(path))


def load_group_file(path: Union[str, Path]) -> GroupMap:
    with open(path, 'rb') as f:
        return load_group_map(f, source=str(path))


def write_edge_list(network: Network, path_or_buffer) -> None:
    """Write the canonical single-year trade CSV; re-ingesting reproduces the network."""
    network_to_frame(network).to_csv(path_or_buffer, index=False, lineterminator='\n')
