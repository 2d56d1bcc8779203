import json

import numpy as np
import pytest

from txpack import Mempool, Transaction, ValidationError, dump_mempool, load_mempool


def test_load_golden_fixture(golden_mempool):
    doc = json.dumps(golden_mempool.to_dict())
    mp = load_mempool(doc)
    assert len(mp) == 7
    assert list(mp.ids) == [1, 2, 3, 4, 5, 6, 7]
    assert mp.prices[1] == pytest.approx(np.e)
    assert mp.is_unit_size


def test_load_accepts_bytes_and_streams(tmp_path):
    doc = b'{"transactions": [{"id": 0, "gas_price": 2.5}]}'
    assert len(load_mempool(doc)) == 1
    path = tmp_path / "m.json"
    path.write_bytes(doc)
    with open(path, "rb") as fh:
        mp = load_mempool(fh)
    assert mp.prices[0] == 2.5


def test_size_defaults_to_one():
    mp = load_mempool('{"transactions": [{"id": 3, "gas_price": 1.0}]}')
    assert mp.sizes[0] == 1.0


def test_empty_array_loads():
    assert len(load_mempool('{"transactions": []}')) == 0


def test_negative_price_names_offender():
    doc = '{"transactions": [{"id": 9, "gas_price": -1}]}'
    with pytest.raises(ValidationError, match="9"):
        load_mempool(doc)


def test_nonpositive_size_rejected():
    doc = '{"transactions": [{"id": 4, "gas_price": 1, "size": 0}]}'
    with pytest.raises(ValidationError, match="4"):
        load_mempool(doc)


def test_duplicate_id_rejected():
    doc = '{"transactions": [{"id": 1, "gas_price": 1}, {"id": 1, "gas_price": 2}]}'
    with pytest.raises(ValidationError, match="duplicate"):
        load_mempool(doc)


@pytest.mark.parametrize("doc", ["not json", "[]", '{"transactions": 5}', '{"transactions": [{}]}'])
def test_malformed_documents_rejected(doc):
    with pytest.raises(ValidationError):
        load_mempool(doc)


def test_round_trip(golden_mempool):
    again = load_mempool(dump_mempool(golden_mempool))
    assert again == golden_mempool


def test_order_preserved():
    doc = '{"transactions": [{"id": 5, "gas_price": 1}, {"id": 2, "gas_price": 3}]}'
    mp = load_mempool(doc)
    assert list(mp.ids) == [5, 2]


def test_total_size_unit_mempool(golden_mempool):
    assert golden_mempool.total_size == len(golden_mempool)


def test_total_size_recomputed():
    mp = Mempool([Transaction(0, 1.0, 2.0), Transaction(1, 1.0, 0.5)])
    assert mp.total_size == pytest.approx(2.5)


def test_from_arrays_matches_loop():
    a = Mempool.from_arrays([0, 1], [1.0, 2.0], [1.0, 3.0])
    b = Mempool([Transaction(0, 1.0, 1.0), Transaction(1, 2.0, 3.0)])
    assert a == b
    assert a.index_of(1) == 1


def test_from_arrays_validates():
    with pytest.raises(ValidationError, match="gas_price"):
        Mempool.from_arrays([0, 1], [1.0, -2.0])
    with pytest.raises(ValidationError, match="duplicate"):
        Mempool.from_arrays([1, 1], [1.0, 2.0])


def test_transaction_invariants():
    with pytest.raises(ValidationError):
        Transaction(-1, 1.0)
    with pytest.raises(ValidationError):
        Transaction(0, 0.0)
    assert Transaction(0, 2.0, 3.0).gas_fee == 6.0
