# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import csv

import pytest

from ofacompress.alphamod import SampleRange
from ofacompress.errors import OfaConfigError
from ofacompress.model import ModelConfig, StudentModel
from ofacompress.profile import (
    MacsConfig,
    compressed_frames,
    count_model_macs,
    frame_period,
    macs_config_for,
    macs_reduction,
    profile_periods,
    reduction_at_period,
    sweep,
    transformer_macs,
    write_profile,
    write_sweep,
)
from ofacompress.training import evaluate_distill


class TestTransformerMacs:
    def test_unit_case(self):
        cfg = MacsConfig(model_dim=1, ffn_dim=1, num_layers=1, alpha_macs_per_frame=0)
        report = transformer_macs(1, cfg)
        assert report.total == 8
        assert (report.attention_linear, report.attention_quadratic, report.ffn) == (4, 2, 2)

    def test_scaling(self):
        cfg = MacsConfig(model_dim=16, ffn_dim=64, num_layers=3)
        small, large = transformer_macs(10, cfg), transformer_macs(20, cfg)
        assert large.attention_quadratic == 4 * small.attention_quadratic
        assert large.attention_linear == 2 * small.attention_linear
        assert large.ffn == 2 * small.ffn
        assert large.alpha_module == 2 * small.alpha_module

    def test_components_add_up(self):
        report = transformer_macs(500, MacsConfig())
        parts = report.attention_linear + report.attention_quadratic + report.ffn + report.alpha_module
        assert parts == report.total
        assert report.alpha_module == 500 * 3 * 768 * 768

    def test_rejects_empty(self):
        with pytest.raises(OfaConfigError):
            transformer_macs(0, MacsConfig())

    @pytest.mark.parametrize("n", [1, 5, 12])
    def test_matches_executed_macs(self, n):
        model = ModelConfig(input_dim=4, encoder_dim=6, model_dim=8, ffn_dim=12, num_blocks=2)
        student = StudentModel(model)
        assert count_model_macs(student, n) == transformer_macs(n, macs_config_for(model)).total

    def test_alpha_charged_at_full_length(self):
        model = ModelConfig(input_dim=4, encoder_dim=6, model_dim=8, ffn_dim=12, num_blocks=1)
        student = StudentModel(model)
        cfg = macs_config_for(model)
        assert count_model_macs(student, 3, alpha_frames=40) == transformer_macs(3, cfg, alpha_frames=40).total


class TestReduction:
    def test_no_compression(self):
        assert macs_reduction(500, 500, MacsConfig()) == 0.0

    def test_reference_90ms(self):
        cfg = MacsConfig()
        assert compressed_frames(90.0, cfg) == 111
        assert reduction_at_period(90.0, cfg) == pytest.approx(0.687, abs=0.05)

    def test_reference_960ms(self):
        cfg = MacsConfig()
        assert compressed_frames(960.0, cfg) == 10
        assert reduction_at_period(960.0, cfg) == pytest.approx(0.906, abs=0.05)

    def test_reference_is_two_layers(self):
        cfg = MacsConfig()
        assert (cfg.num_layers, cfg.model_dim, cfg.ffn_dim) == (2, 768, 3072)
        assert reduction_at_period(90.0, cfg) == pytest.approx(0.7143, abs=1e-4)
        assert reduction_at_period(960.0, cfg) == pytest.approx(0.8824, abs=1e-4)

    def test_monotone_in_period(self):
        rows = profile_periods(MacsConfig(), [960, 20, 160, 90])
        assert [r.period_ms for r in rows] == [20.0, 90.0, 160.0, 960.0]
        assert rows[0].macs_reduction == 0.0
        reductions = [r.macs_reduction for r in rows]
        assert reductions == sorted(reductions)

    def test_rejects_expansion(self):
        with pytest.raises(OfaConfigError):
            macs_reduction(10, 11, MacsConfig())
        with pytest.raises(OfaConfigError):
            compressed_frames(10.0, MacsConfig())

    def test_write_profile(self, tmp_path):
        path = tmp_path / "profile.csv"
        write_profile(path, profile_periods(MacsConfig(), [20, 90]))
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0]) == ["period_ms", "frames", "total_macs", "macs_reduction"]
        assert int(rows[1]["frames"]) == 111


class TestFramePeriod:
    def test_identity(self):
        assert frame_period(37, 37, 20.0) == 20.0

    def test_ninety(self):
        assert frame_period(500, 111, 20.0) == pytest.approx(90.09, abs=0.01)

    def test_single_frame(self):
        assert frame_period(48, 1, 20.0) == 960.0

    def test_rejects_zero_fires(self):
        with pytest.raises(OfaConfigError):
            frame_period(10, 0, 20.0)


class TestSweep:
    def test_rows_sorted_and_monotone(self, student, teacher, small_corpus):
        rows = sweep(student, teacher, small_corpus, [1.5, 0.0, 1.0, 0.5, 1.9])
        assert [r.lam for r in rows] == [0.0, 0.5, 1.0, 1.5, 1.9]
        fires = [r.mean_fires for r in rows]
        assert fires == sorted(fires, reverse=True)
        periods = [r.frame_period_ms for r in rows]
        assert periods == sorted(periods)

    def test_lambda_zero_is_base_period(self, student, teacher, small_corpus):
        (row,) = sweep(student, teacher, small_corpus, [0.0])
        assert row.frame_period_ms == pytest.approx(small_corpus.frame_period_ms)
        assert row.macs_reduction == 0.0

    def test_single_point_matches_evaluation(self, student, teacher, small_corpus):
        (row,) = sweep(student, teacher, small_corpus, [1.0])
        assert row.loss == evaluate_distill(student, teacher, small_corpus, 1.0).loss

    def test_workers(self, student, teacher, small_corpus):
        lambdas = [0.0, 0.4, 0.8, 1.2, 1.6]
        assert sweep(student, teacher, small_corpus, lambdas, workers=3) == sweep(
            student, teacher, small_corpus, lambdas
        )

    def test_extrapolation_flagged(self, student, teacher, small_corpus):
        rows = sweep(student, teacher, small_corpus, [0.5, 1.5], lambda_range=SampleRange.parse("0:1"))
        assert [r.extrapolated for r in rows] == [False, True]

    def test_write(self, tmp_path, student, teacher, small_corpus):
        path = tmp_path / "sweep.csv"
        write_sweep(path, sweep(student, teacher, small_corpus, [0.0, 1.0]))
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 2
        assert list(rows[0]) == ["lambda", "frame_period_ms", "mean_fires", "loss", "macs_reduction", "extrapolated"]
        assert float(rows[0]["lambda"]) == 0.0
