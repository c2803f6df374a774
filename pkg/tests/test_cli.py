import json
import math

import numpy as np
import pytest

from relaycontracts import TypeGrid, second_best_menu
from relaycontracts.cli import main

KNAPSACK_OFFERS = (
    "m,n,gamma_linear,transfer\n"
    "0,0,10,2\n"
    "1,0,6,1\n"
    "2,0,5,1\n"
)


def parse_csv(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_table3_command(capsys):
    assert main(["table3"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert len(rows) == 10
    assert rows[0]["fb_gamma_db"] == "15.4490"
    assert rows[0]["sb_gamma_db"] == "9.0400"
    assert rows[9]["sb_gamma_db"] == "22.9528"
    assert rows[9]["fb_gamma_db"] == "22.9528"


def test_contracts_default_matches_table3(capsys):
    assert main(["contracts"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    expected_db = [9.0401, 12.3131, 14.6324, 16.4428, 17.9322,
                   19.1990, 20.3020, 21.2794, 22.1564, 22.9528]
    expected_t = [0.1603, 0.2806, 0.4008, 0.5210, 0.6412,
                  0.7615, 0.8817, 1.0019, 1.1221, 1.2424]
    assert len(rows) == 10
    for row, db, t in zip(rows, expected_db, expected_t):
        assert float(row["gamma_db"]) == pytest.approx(db, abs=1e-3)
        assert float(row["transfer"]) == pytest.approx(t, abs=5e-4)


def test_contracts_single_type(capsys):
    assert main(["contracts", "--quant", "1"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert len(rows) == 1
    assert float(rows[0]["rent"]) == pytest.approx(0.0, abs=1e-9)


def test_contracts_doubled_cost(capsys):
    assert main(["contracts", "--cost", "2"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    gammas = np.array([float(r["gamma_linear"]) for r in rows])

    # closed-form oracle with uniform masses: chat_k = c(1/d_k + (1/d_k - 1/d_{k+1})(K-k))
    deltas = np.arange(50.0, 300.0, 25.0)
    c, k_count = 2.0, 10
    for k in (0, 2, 9):
        if k < k_count - 1:
            chat = c * (1 / deltas[k] + (1 / deltas[k] - 1 / deltas[k + 1]) * (k_count - 1 - k))
        else:
            chat = c / deltas[k]
        expected = max(1.0 / (2.0 * math.log(2.0) * chat) - 1.0, 0.0)
        assert gammas[k] == pytest.approx(expected, rel=1e-9)

    # doubling c is the same screening problem as halving every type
    halved = TypeGrid(deltas / 2.0, np.full((10, 16), 0.1))
    menu_halved = second_best_menu(halved, 1.0)
    assert np.allclose(gammas, menu_halved.snrs, rtol=1e-12)


def test_contracts_first_best_menu(capsys):
    assert main(["contracts", "--menu", "first_best"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert all(float(r["rent"]) == pytest.approx(0.0, abs=1e-12) for r in rows)


def test_select_knapsack_example(tmp_path, capsys):
    offers = tmp_path / "offers.csv"
    offers.write_text(KNAPSACK_OFFERS)
    assert main(["select", str(offers), "--budget", "2", "--resolution", "10"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    overall = [r for r in rows if r["method"] == "Overall"][0]
    assert float(overall["capacity"]) == pytest.approx(math.log2(12.0))
    assert overall["selected_m_list"] == "1;2"
    relaxed = [r for r in rows if r["method"] == "Relaxed"][0]
    assert float(relaxed["capacity"]) >= math.log2(12.0) - 1e-9


def test_select_empty_offers(tmp_path, capsys):
    offers = tmp_path / "offers.csv"
    offers.write_text("m,n,gamma_linear,transfer\n")
    assert main(["select", str(offers)]) == 0
    rows = parse_csv(capsys.readouterr().out)
    for row in rows:
        assert float(row["capacity"]) == 0.0


def test_select_negative_budget_is_usage_error(tmp_path, capsys):
    offers = tmp_path / "offers.csv"
    offers.write_text(KNAPSACK_OFFERS)
    with pytest.raises(SystemExit) as exc:
        main(["select", str(offers), "--budget", "-1"])
    assert exc.value.code == 2


def test_select_malformed_csv_names_line(tmp_path, capsys):
    offers = tmp_path / "offers.csv"
    offers.write_text("m,n,gamma_linear,transfer\n0,0,1.5\n")
    assert main(["select", str(offers)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_simulate_deterministic_output(tmp_path):
    args = [
        "simulate", "--relays", "3", "--budget", "2", "--subcarriers", "3",
        "--quant", "4", "--trials", "3", "--seed", "77",
    ]
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()


def test_simulate_zero_relays(capsys):
    args = ["simulate", "--relays", "0", "--trials", "1", "--subcarriers", "2"]
    assert main(args) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert all(float(r["mean_capacity_per_subcarrier"]) == 0.0 for r in rows)


def test_simulate_sweep_flags(capsys):
    args = [
        "simulate", "--relays", "2,3", "--budget", "1,2", "--trials", "2",
        "--subcarriers", "2", "--quant", "3",
    ]
    assert main(args) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert len(rows) == 4 * 3


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "dist": {"kind": "uniform", "low": 50, "high": 300},
        "quant": 4,
        "subcarriers": 2,
        "relays": 2,
        "budget": 1.0,
        "trials": 2,
        "seed": 5,
    }))
    assert main(["simulate", "--config", str(config), "--budget", "2"]) == 0
    rows = parse_csv(capsys.readouterr().out)
    assert all(r["budget"] == "2" for r in rows)


def test_config_rejects_unknown_keys(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"quant": 4, "bogus": 1}))
    assert main(["simulate", "--config", str(config)]) == 1
    assert "bogus" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
