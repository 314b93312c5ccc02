import json
import random

import pytest

from bandqft import cli, store
from bandqft import number_theory as nt
from bandqft.qft_kernel import CapExceededError


@pytest.fixture
def cache(tmp_path, monkeypatch):
    monkeypatch.delenv(store.CACHE_ENV, raising=False)
    return tmp_path / "cache"


class TestSpectrumCache:
    def test_round_trip(self, cache):
        rec = nt.semiprime_record(221)
        fresh = store.cached_spectrum(rec, cache)
        assert (cache / "N221.json").exists()
        assert store.load_spectrum(cache, rec) == fresh

    def test_random_audit(self, cache):
        recs = random.Random(7).sample(nt.enumerate_semiprimes(5000), 50)
        for rec in recs:
            store.cached_spectrum(rec, cache)
        for rec in recs:
            assert store.load_spectrum(cache, rec) == nt.order_spectrum(rec)

    def test_tampered_file_is_recomputed(self, cache):
        rec = nt.semiprime_record(35)
        store.cached_spectrum(rec, cache)
        path = cache / "N35.json"
        data = json.loads(path.read_text())
        data["entries"][0][1] += 1
        path.write_text(json.dumps(data))
        assert store.load_spectrum(cache, rec) is None
        assert store.cached_spectrum(rec, cache) == nt.order_spectrum(rec)
        assert store.load_spectrum(cache, rec) is not None

    def test_env_override(self, tmp_path, monkeypatch):
        monkeypatch.setenv(store.CACHE_ENV, str(tmp_path / "env"))
        store.cached_spectrum(nt.semiprime_record(15))
        assert (tmp_path / "env" / "N15.json").exists()

    def test_no_cache(self, monkeypatch):
        monkeypatch.delenv(store.CACHE_ENV, raising=False)
        assert store.cache_dir() is None


class TestSweep:
    def test_single_power_of_two_row(self):
        res = store.run_sweep(store.SweepConfig((), (1,), semiprimes=(15,)))
        (row,) = res.rows
        assert (row["n"], row["b"], row["N"]) == (8, 1, 15)
        assert row["P"] == pytest.approx(1, abs=1e-12)

    def test_cap_checked_up_front(self):
        with pytest.raises(CapExceededError):
            store.SweepConfig((10, 27), (1,))
        with pytest.raises(ValueError):
            store.SweepConfig((10,), (1,), per_n=0)

    def test_repeat_is_byte_identical(self):
        cfg = store.SweepConfig((10, 11), (1, 2), per_n=2)
        a = store.numeric_projection(store.run_sweep(cfg).rows)
        b = store.numeric_projection(store.run_sweep(cfg).rows)
        assert a == b

    def test_worker_count_does_not_change_numbers(self):
        one = store.SweepConfig((10, 12), (1, 3), per_n=2, threads=1)
        two = store.SweepConfig((10, 12), (1, 3), per_n=2, threads=2)
        assert one.config_hash() == two.config_hash()
        assert store.numeric_projection(store.run_sweep(one).rows) == store.numeric_projection(
            store.run_sweep(two).rows
        )

    def test_averaged_offsets(self):
        res = store.run_sweep(store.SweepConfig((11,), (1,), per_n=1, s0_samples=3))
        assert res.rows[0]["s0"] == "avg3"


class TestFiles:
    def test_csv_round_trip(self, tmp_path):
        rows = [{"a": 0.1 + 0.2, "b": 3, "c": None}, {"a": 1 / 3, "b": -1, "c": "x"}]
        path = tmp_path / "t.csv"
        store.write_rows(path, rows, ("a", "b", "c"), tag="demo")
        text = path.read_text()
        assert text.startswith(f"# schema: {store.SCHEMA} demo\na,b,c\n")
        back = store.read_rows(path)
        assert back[0]["a"] == 0.1 + 0.2 and back[1]["a"] == 1 / 3
        assert back[0]["c"] is None and back[1]["c"] == "x"

    def test_json(self, tmp_path):
        path = tmp_path / "t.json"
        store.write_rows(path, [{"a": 1.5}], ("a",), format="json")
        assert store.read_rows(path) == [{"a": 1.5}]
        assert json.loads(path.read_text())["schema"] == store.SCHEMA


class TestCli:
    def run(self, capsys, *argv):
        code = cli.main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    def test_orders(self, capsys, cache):
        code, out, _ = self.run(capsys, "orders", "15", "--cache-dir", str(cache))
        assert code == 0
        assert out.splitlines()[2:] == ["15,3,5,8,1,1", "15,3,5,8,2,3", "15,3,5,8,4,4"]

    def test_orders_bad_input(self, capsys):
        code, _, err = self.run(capsys, "orders", "9")
        assert code == 2 and "square of a prime" in err

    def test_orders_limit_fills_cache(self, capsys, cache):
        code, _, _ = self.run(capsys, "orders", "--limit", "1000", "--cache-dir", str(cache))
        assert code == 0
        recs = nt.enumerate_semiprimes(1000)
        assert len(list(cache.glob("N*.json"))) == len(recs)
        for rec in recs:
            sp = store.load_spectrum(cache, rec)
            assert sum(nu for _, nu in sp.entries) == rec.totient

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["sweep"])
        assert exc.value.code == 2
        assert self.run(capsys, "orders")[0] == 2

    def test_sweep_and_fit(self, capsys, tmp_path):
        out = tmp_path / "s.csv"
        code, _, _ = self.run(capsys, "sweep", "--n", "9..14", "--b", "2", "--per-n", "2", "-o", str(out))
        assert code == 0
        rows = store.read_rows(out)
        # some small windows hold fewer than two semiprimes (n = 10 holds none)
        expected = sum(len(nt.semiprimes_for_n(n, 2)) for n in range(9, 15))
        assert len(rows) == expected == 9 and set(rows[0]) == set(store.SWEEP_COLUMNS)
        code, text, _ = self.run(capsys, "fit", "--input", str(out))
        assert code == 0 and text.splitlines()[1].startswith("b,xi_fitted")

    def test_sweep_cap(self, capsys):
        code, _, err = self.run(capsys, "sweep", "--n", "27", "--b", "1")
        assert code == 2 and "cap" in err

    def test_peak_shape(self, capsys):
        code, out, err = self.run(capsys, "peak-shape", "--N", "247", "--omega", "36", "--b", "1,2,3,10", "--window", "4")
        assert code == 0
        assert len(out.splitlines()) == 2 + 4 * 9
        spread = float(err.strip().splitlines()[-1].split()[-1])
        assert spread < 0.1

    def test_peak_shape_rejects_foreign_order(self, capsys):
        assert self.run(capsys, "peak-shape", "--N", "247", "--omega", "35", "--b", "1")[0] == 2

    def test_separability(self, capsys):
        code, out, _ = self.run(capsys, "separability", "--N", "65", "--b", "1,2", "--format", "json")
        assert code == 0
        assert [r["b"] for r in json.loads(out)["rows"]] == [1, 2]

    def test_analytic_nt(self, capsys):
        code, out, _ = self.run(capsys, "analytic", "--nt", "--b", "8")
        assert code == 0 and out.strip() == "19.38"

    def test_analytic_table(self, capsys):
        code, out, _ = self.run(capsys, "analytic", "--b", "8", "--n", "20")
        assert code == 0
        header, row = out.splitlines()[1:3]
        values = dict(zip(header.split(","), row.split(",")))
        assert values["validity_bound"] == "79682"

    def test_verify(self, capsys):
        code, out, _ = self.run(capsys, "verify", "--limit", "2000")
        assert code == 0
        assert out.strip() == "0 violations (order-2 uniqueness, max-order bound)"

    def test_verify_reports_violations(self, capsys, monkeypatch):
        bad = nt.VerificationReport("order-2 uniqueness", 1, [15])
        monkeypatch.setattr(nt, "verify_order2_uniqueness", lambda limit: bad)
        code, out, _ = self.run(capsys, "verify", "--limit", "100")
        assert code == 1 and out.startswith("1 violations")

    def test_oracle_check(self, capsys):
        code, _, err = self.run(capsys, "oracle-check", "--N", "15,21")
        assert code == 0 and "ok" in err

    def test_oracle_check_failure_exit(self, capsys, monkeypatch):
        import numpy as np

        from bandqft import performance

        real = performance.peak_probabilities
        monkeypatch.setattr(performance, "peak_probabilities", lambda *a: real(*a) + np.float64(1e-6))
        assert self.run(capsys, "oracle-check", "--N", "21")[0] == 1

    def test_int_list(self):
        assert cli.int_list("9..12") == (9, 10, 11, 12)
        assert cli.int_list("1,3-4") == (1, 3, 4)
