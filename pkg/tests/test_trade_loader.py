"""Trade CSV parsing, yearly network construction and group maps."""

import io

import pytest

from data.trade_loader import (
    GroupMap, TradeRecord, build_yearly_networks, load_group_file, load_group_map,
    load_trade_file, parse_trade_records, write_edge_list,
)
from logic.errors import DuplicateCode, EmptyInput, MalformedRow
from utils.fixtures import random_network


def test_parse_single_row():
    records = parse_trade_records(b"2017,SAU,USA,1000.5\n")
    assert records == [TradeRecord(2017, 'SAU', 'USA', 1000.5)]


def test_header_is_optional():
    with_header = parse_trade_records("year,exporter,importer,volume\n2017,SAU,USA,3\n")
    without = parse_trade_records("2017,SAU,USA,3\n")
    assert with_header == without


def test_header_after_blank_lines():
    records = parse_trade_records("\n  \nyear,exporter,importer,volume\n2017,SAU,USA,3\n")
    assert records == [TradeRecord(2017, 'SAU', 'USA', 3.0)]


def test_header_only_counts_once():
    with pytest.raises(MalformedRow) as info:
        parse_trade_records("2017,SAU,USA,3\nyear,exporter,importer,volume\n")
    assert info.value.line == 2


def test_bom_and_crlf():
    records = parse_trade_records(b"\xef\xbb\xbfyear,exporter,importer,volume\r\n2017,A,B,2\r\n")
    assert records == [TradeRecord(2017, 'A', 'B', 2.0)]


@pytest.mark.parametrize("row", [
    "2017,SAU,USA,0",
    "2017,SAU,USA,-4",
    "2017,SAU,USA,abc",
    "2017,SAU,USA,nan",
    "twenty,SAU,USA,1",
    "2017,,USA,1",
    "2017,SAU,USA",
])
def test_malformed_rows(row):
    with pytest.raises(MalformedRow):
        parse_trade_records(row + "\n")


def test_malformed_row_reports_line():
    text = "year,exporter,importer,volume\n2017,A,B,1\n2017,A,C,zero\n"
    with pytest.raises(MalformedRow) as info:
        parse_trade_records(text, source="trade.csv")
    assert info.value.line == 3
    assert "trade.csv:line 3" in str(info.value)


def test_lenient_skips_and_collects():
    skipped = []
    records = parse_trade_records("2017,A,B,1\n2017,A,C,x\n2017,B,C,2\n", lenient=True, skipped=skipped)
    assert [r.importer for r in records] == ['B', 'C']
    assert len(skipped) == 1 and skipped[0].line == 2


def test_duplicates_are_summed():
    networks = build_yearly_networks([TradeRecord(2017, 'A', 'B', 5), TradeRecord(2017, 'A', 'B', 7)])
    net = networks[2017]
    assert net.n_edges == 1
    assert net.edge_volume('A', 'B') == 12
    assert networks.merged_duplicates[2017] == 1


def test_years_are_partitioned():
    networks = build_yearly_networks([TradeRecord(2017, 'A', 'B', 5), TradeRecord(2016, 'B', 'C', 2)])
    assert list(networks) == [2016, 2017]
    assert networks[2017].codes == ('A', 'B')
    assert networks[2016].codes == ('B', 'C')


def test_only_self_loops_is_empty():
    with pytest.raises(EmptyInput):
        build_yearly_networks([TradeRecord(2017, 'A', 'A', 5)])


def test_self_loops_dropped_and_counted():
    networks = build_yearly_networks([
        TradeRecord(2017, 'A', 'A', 5), TradeRecord(2017, 'A', 'B', 1), TradeRecord(2016, 'C', 'C', 1),
    ])
    assert list(networks) == [2017]
    assert networks.self_loops == {2016: 1, 2017: 1}
    assert networks.empty_years == (2016,)
    assert 'A' in networks[2017] and networks[2017].n_edges == 1


def test_no_records_is_empty():
    with pytest.raises(EmptyInput):
        build_yearly_networks([])


def test_aggregation_ignores_record_order():
    records = [
        TradeRecord(2017, 'A', 'B', 0.1), TradeRecord(2017, 'A', 'B', 0.2),
        TradeRecord(2017, 'A', 'B', 0.3), TradeRecord(2017, 'C', 'A', 1e16),
        TradeRecord(2017, 'C', 'A', 1.0), TradeRecord(2017, 'C', 'A', -1e16 + 2e16),
    ]
    forward = build_yearly_networks(records)[2017]
    backward = build_yearly_networks(records[::-1])[2017]
    assert forward == backward


def test_edge_list_round_trip():
    for seed in range(10):
        net = random_network(6, 0.4, seed)
        if net is None:
            continue
        buffer = io.StringIO()
        write_edge_list(net, buffer)
        rebuilt = build_yearly_networks(parse_trade_records(buffer.getvalue()))[net.year]
        assert rebuilt == net


def test_group_map():
    groups = load_group_map("USA,North America\nCHN,Asia\n")
    assert groups.entries == {'USA': 'North America', 'CHN': 'Asia'}
    assert groups.group_of('CHN') == 'Asia'
    assert groups.group_of('SAU') == 'unmapped'


def test_group_map_duplicate():
    with pytest.raises(DuplicateCode):
        load_group_map("USA,NA\nUSA,EU\n")


def test_group_map_empty():
    groups = load_group_map(b"")
    assert len(groups) == 0
    assert groups == GroupMap()


def test_group_map_bad_row():
    with pytest.raises(MalformedRow):
        load_group_map("USA\n")


def test_files_on_disk(tmp_path):
    trade = tmp_path / "trade.csv"
    trade.write_text("year,exporter,importer,volume\n2017,A,B,1\n", encoding='utf-8')
    groups = tmp_path / "groups.csv"
    groups.write_text("economy,group\nA,Asia\n", encoding='utf-8')

    assert load_trade_file(trade) == [TradeRecord(2017, 'A', 'B', 1.0)]
    assert load_group_file(groups).group_of('A') == 'Asia'


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_trade_file(tmp_path / "missing.csv")
