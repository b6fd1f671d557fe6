import math

import numpy as np
import pytest

from jumppde import Gaussian, DoubleExponential, ModelParams, OptionSpec
from jumppde.oracle import black_scholes, merton_european_series
from jumppde.errors import WrongModel


class TestBlackScholes:
    def test_near_zero_maturity_gives_intrinsic(self):
        assert black_scholes(90.0, 100.0, 0.05, 0.2, 1e-9, "put") == pytest.approx(10.0, abs=1e-6)
        assert black_scholes(120.0, 100.0, 0.05, 0.2, 1e-9, "call") == pytest.approx(20.0, abs=1e-6)

    def test_vanishing_volatility_zero_rate(self):
        assert black_scholes(90.0, 100.0, 0.0, 1e-9, 0.5, "put") == pytest.approx(10.0, abs=1e-9)
        assert black_scholes(110.0, 100.0, 0.0, 1e-9, 0.5, "put") == pytest.approx(0.0, abs=1e-9)

    def test_put_call_parity(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            S0 = rng.uniform(20.0, 200.0)
            K = rng.uniform(20.0, 200.0)
            r = rng.uniform(0.0, 0.1)
            sigma = rng.uniform(0.05, 0.6)
            T = rng.uniform(0.05, 2.0)
            call = black_scholes(S0, K, r, sigma, T, "call")
            put = black_scholes(S0, K, r, sigma, T, "put")
            assert call - put == pytest.approx(S0 - K * math.exp(-r * T), abs=1e-12 * max(S0, K))


class TestMertonSeries:
    def test_no_jumps_reduces_to_black_scholes(self):
        m = ModelParams(r=0.05, sigma=0.2, lam=0.0, jump=Gaussian(-0.1, 0.3))
        opt = OptionSpec("european", "put", 100.0, 0.5)
        price, tail = merton_european_series(m, opt, 95.0)
        assert price == pytest.approx(black_scholes(95.0, 100.0, 0.05, 0.2, 0.5, "put"), rel=1e-14)
        assert tail == 0.0

    def test_reference_put_value(self, merton_model):
        opt = OptionSpec("european", "put", 100.0, 0.25)
        price, tail = merton_european_series(merton_model, opt, 100.0)
        assert price == pytest.approx(3.149, abs=1.5e-3)
        assert tail < 1e-10

    def test_reference_call_values(self, merton_model):
        opt = OptionSpec("european", "call", 100.0, 0.25)
        for spot, expected in ((90.0, 0.528), (100.0, 4.391), (110.0, 12.643)):
            price, tail = merton_european_series(merton_model, opt, spot)
            assert price == pytest.approx(expected, abs=1.5e-3)
            assert tail < 1e-10

    def test_series_parity(self, merton_model):
        T = 0.25
        put = merton_european_series(merton_model, OptionSpec("european", "put", 100.0, T), 104.0)[0]
        call = merton_european_series(merton_model, OptionSpec("european", "call", 100.0, T), 104.0)[0]
        assert call - put == pytest.approx(104.0 - 100.0 * math.exp(-0.05 * T), abs=1e-9)

    def test_wrong_model_rejected(self, merton_model):
        de = ModelParams(r=0.05, sigma=0.2, lam=1.0, jump=DoubleExponential(0.6, 25.0, 25.0))
        with pytest.raises(WrongModel):
            merton_european_series(de, OptionSpec("european", "put", 100.0, 0.25), 100.0)
        with pytest.raises(WrongModel):
            merton_european_series(merton_model, OptionSpec("american", "put", 100.0, 0.25), 100.0)
        with pytest.raises(WrongModel):
            merton_european_series(
                merton_model,
                OptionSpec("european", "call", 110.0, 1.0, barrier=85.0, rebate=1.0),
                100.0,
            )
