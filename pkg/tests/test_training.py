# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import json
import math
from dataclasses import replace

import numpy as np
import pytest

from ofacompress.alphamod import LAMBDA_CEILING, LambdaControl, ReplayLambdaSampler, switch_margin, theta_from_lambda
from ofacompress.cif import boundary_margin
from ofacompress.data_io import GuidanceTargets
from ofacompress.diffmath import Matrix, check_gradients
from ofacompress.errors import OfaConfigError, OfaDivergenceError, OfaNonFiniteError, OfaShapeError
from ofacompress.training import (
    SGD,
    AdaptConfig,
    GuidanceMode,
    TaskLevel,
    TrainConfig,
    adapt_lambda,
    boundary_bce,
    build_task,
    distill_loss,
    evaluate_distill,
    evaluate_task,
    fixed_lambda_pretrain,
    grid_search_lambda,
    guidance_loss,
    ofa_pretrain,
    quantity_loss,
    read_trace,
    total_loss,
    write_trace,
    DownstreamHead,
    LambdaAdapter,
    StepRecord,
    task_loss,
)
from ofacompress.training import optim


def params_of(model):
    return {name: p.data.copy() for name, p in model.parameters().items()}


class TestLosses:
    def test_distill_identical(self):
        y = Matrix([[0.3, -1.0], [2.0, 0.5]])
        assert distill_loss([y], [y]).item() == pytest.approx(-math.log(1.0 / (1.0 + math.exp(-1.0))), abs=1e-9)
        assert distill_loss([y], [y]).item() == pytest.approx(0.313261, abs=1e-6)

    def test_distill_without_cosine(self):
        y = Matrix([[0.3, -1.0]])
        assert distill_loss([y, y], [y, y], cosine_weight=0.0).item() == 0.0

    def test_distill_hand_value(self):
        assert distill_loss([Matrix([[2.0]])], [Matrix([[0.0]])], cosine_weight=0.0).item() == 2.0

    def test_distill_shape_mismatch(self):
        with pytest.raises(OfaShapeError):
            distill_loss([Matrix.zeros(3, 2)], [Matrix.zeros(2, 2)])
        with pytest.raises(OfaShapeError):
            distill_loss([Matrix.zeros(2, 2)], [])

    def test_bce_perfect(self):
        targets = GuidanceTargets([0, 1, 0, 1])
        assert boundary_bce([0.0, 1.0, 0.0, 1.0], targets).item() <= 1e-6

    def test_bce_uniform(self):
        targets = GuidanceTargets([0, 0, 1])
        assert boundary_bce([0.5, 0.5, 0.5], targets).item() == pytest.approx(math.log(2.0))

    def test_bce_length_mismatch(self):
        with pytest.raises(OfaShapeError):
            boundary_bce([0.5, 0.5], GuidanceTargets([0, 0, 1]))

    def test_quantity(self):
        assert quantity_loss([0.4, 0.5, 0.3, 0.6], 2).item() == pytest.approx(0.2)

    def test_guidance_modes(self):
        alpha, targets = [0.5, 0.5, 0.5], GuidanceTargets([0, 0, 1])
        bce = guidance_loss(alpha, targets, GuidanceMode.BoundaryBce).item()
        qty = guidance_loss(alpha, targets, GuidanceMode.Quantity).item()
        both = guidance_loss(alpha, targets, GuidanceMode.Both, 1.0, 0.5).item()
        assert qty == pytest.approx(0.5)
        assert both == pytest.approx(bce + 0.5 * qty)

    def test_total_drops_disabled_terms(self):
        d, b, q = Matrix.scalar(1.0), Matrix.scalar(2.0), Matrix.scalar(4.0)
        assert total_loss(d, b, q, GuidanceMode.Both, 1.0, 1.0, 0.5).item() == 5.0
        assert total_loss(d, b, q, GuidanceMode.BoundaryBce, 1.0, 1.0, 0.5).item() == 3.0
        assert total_loss(d, b, q, "quantity", 1.0, 1.0, 0.5).item() == 3.0

    def test_guidance_ignores_lambda(self, student, small_corpus):
        utt = small_corpus[0]
        seen = set()
        for lam in (0.0, 0.6, 1.0, 1.4, 1.95):
            out = student.forward(utt.features, LambdaControl.fixed(lam))
            seen.add((boundary_bce(out.alpha_raw, utt.targets).item(), quantity_loss(out.alpha_raw, utt.targets.num_segments).item()))
        assert len(seen) == 1


class TestOptimizer:
    def test_momentum(self):
        p = Matrix.scalar(1.0, requires_grad=True)
        opt = SGD({"p": p}, lr=0.1, momentum=0.9)
        opt.step({"p": np.array([[1.0]])})
        opt.step({"p": np.array([[1.0]])})
        assert p.item() == pytest.approx(1.0 - 0.1 - 0.1 * 1.9)

    def test_missing_gradient_is_zero(self):
        p = Matrix.scalar(1.0, requires_grad=True)
        SGD({"p": p}, lr=0.1).step({})
        assert p.item() == 1.0

    def test_non_finite(self):
        p = Matrix.scalar(1.0, requires_grad=True)
        with np.errstate(over="ignore"), pytest.raises(OfaNonFiniteError):
            SGD({"p": p}, lr=1e308).step({"p": np.array([[1e10]])})


class TestConfig:
    def test_defaults_valid(self):
        assert TrainConfig().check()
        assert AdaptConfig().check()

    def test_guidance_mode_coerced(self):
        cfg = TrainConfig.from_dict({"guidance_mode": "quantity"})
        cfg.check()
        assert cfg.guidance_mode == GuidanceMode.Quantity

    @pytest.mark.parametrize(
        "kwargs",
        [{"lambda_range": "0:3"}, {"learning_rate": 0.0}, {"momentum": 1.0}, {"batch_size": 0}, {"guidance_mode": "none"}],
    )
    def test_train_rejects(self, kwargs):
        with pytest.raises(OfaConfigError):
            TrainConfig(**kwargs).check()

    @pytest.mark.parametrize("kwargs", [{"level": "sentence"}, {"theta_lr": -1.0}, {"lambda_max": 2.5}])
    def test_adapt_rejects(self, kwargs):
        with pytest.raises(OfaConfigError):
            AdaptConfig(**kwargs).check()


class TestPretrain:
    def test_zero_steps_is_a_no_op(self, train_config, small_corpus, student, teacher):
        cfg = replace(train_config, steps=0, lambda_range="0:1")
        result = ofa_pretrain(cfg, small_corpus, student, teacher)
        assert result.trace == []
        for name, value in params_of(student).items():
            np.testing.assert_array_equal(result.student.parameters()[name].data, value)

    def test_input_model_untouched(self, train_config, small_corpus, student, teacher):
        before = params_of(student)
        result = ofa_pretrain(train_config, small_corpus, student, teacher)
        for name, value in before.items():
            np.testing.assert_array_equal(student.parameters()[name].data, value)
        assert any(
            not np.array_equal(result.student.parameters()[name].data, value) for name, value in before.items()
        )

    def test_reproducible(self, train_config, small_corpus, student, teacher):
        a = ofa_pretrain(train_config, small_corpus, student, teacher)
        b = ofa_pretrain(train_config, small_corpus, student, teacher)
        assert a.trace == b.trace
        assert len(a.trace) == train_config.steps
        for name, value in params_of(a.student).items():
            np.testing.assert_array_equal(b.student.parameters()[name].data, value)

    def test_lambdas_within_range(self, train_config, small_corpus, student, teacher):
        cfg = replace(train_config, lambda_range="0:1", steps=5)
        trace = ofa_pretrain(cfg, small_corpus, student, teacher).trace
        assert all(0.0 <= rec.lam <= 1.0 for rec in trace)

    def test_fixed_equals_replayed_draws(self, train_config, small_corpus, student, teacher):
        fixed = fixed_lambda_pretrain(train_config, 0.7, small_corpus, student, teacher)
        replayed = ofa_pretrain(
            train_config, small_corpus, student, teacher, sampler=ReplayLambdaSampler([0.7] * train_config.steps)
        )
        assert fixed.trace == replayed.trace
        assert all(rec.lam == 0.7 for rec in fixed.trace)

    def test_workers_do_not_change_results(self, train_config, small_corpus, student, teacher):
        serial = ofa_pretrain(train_config, small_corpus, student, teacher)
        threaded = ofa_pretrain(replace(train_config, workers=3), small_corpus, student, teacher)
        assert serial.trace == threaded.trace

    def test_divergence(self, monkeypatch, train_config, small_corpus, student, teacher):
        def blow_up(self, grads):
            raise OfaNonFiniteError("update of encoder.weight is not finite")

        monkeypatch.setattr(optim.SGD, "step", blow_up)
        with pytest.raises(OfaDivergenceError) as exc:
            ofa_pretrain(train_config, small_corpus, student, teacher)
        assert exc.value.step == 0
        assert 0.0 <= exc.value.lam < 2.0

    def test_trace_round_trip(self, tmp_path, train_config, small_corpus, student, teacher):
        trace = ofa_pretrain(train_config, small_corpus, student, teacher).trace
        path = tmp_path / "trace.csv"
        write_trace(path, trace)
        assert read_trace(path) == trace
        assert path.read_text().splitlines()[0] == "step,lambda,distill,guidance,quantity,total"

    @pytest.mark.parametrize(
        "mode, guidance_zero, quantity_zero",
        [
            (GuidanceMode.Quantity, True, False),
            (GuidanceMode.BoundaryBce, False, True),
            (GuidanceMode.Both, False, False),
        ],
    )
    def test_trace_reports_active_terms(
        self, mode, guidance_zero, quantity_zero, train_config, small_corpus, student, teacher
    ):
        cfg = replace(train_config, guidance_mode=mode)
        trace = ofa_pretrain(cfg, small_corpus, student, teacher).trace
        assert len(trace) == cfg.steps
        assert all((rec.guidance == 0.0) == guidance_zero for rec in trace)
        assert all((rec.quantity == 0.0) == quantity_zero for rec in trace)

    def test_evaluate(self, small_corpus, student, teacher):
        result = evaluate_distill(student, teacher, small_corpus, 0.0)
        assert result.fire_counts == result.frame_counts
        assert result.mean_fires == pytest.approx(np.mean([u.num_frames for u in small_corpus]))
        assert np.isfinite(result.loss)


@pytest.fixture
def utterance_task(small_corpus):
    return build_task(small_corpus, TaskLevel.Utterance)


class TestTasks:
    def test_levels(self, small_corpus):
        utt_task = build_task(small_corpus, "utterance")
        frame_task = build_task(small_corpus, TaskLevel.Frame)
        assert utt_task.num_classes == small_corpus.num_utterance_classes
        assert frame_task.num_classes == small_corpus.vocab_size
        assert len(frame_task.labels(small_corpus[0])) == small_corpus[0].num_frames

    def test_rate_weight_adds_mean_alpha(self, student, utterance_task):
        utt = utterance_task.utterances[0]
        head = DownstreamHead(student.config.model_dim, utterance_task.num_classes, 0)
        ctl = LambdaControl.fixed(0.5)
        plain = task_loss(student, head, utterance_task, utt, ctl).loss.item()
        weighted = task_loss(student, head, utterance_task, utt, ctl, rate_weight=0.3)
        mean_alpha = student.compress(utt.features, ctl).alpha_mod.data.mean()
        assert weighted.loss.item() == pytest.approx(plain + 0.3 * mean_alpha)

    def test_frame_level_counts_every_frame(self, student, small_corpus):
        task = build_task(small_corpus, TaskLevel.Frame)
        head = DownstreamHead(student.config.model_dim, task.num_classes, 0)
        out = task_loss(student, head, task, small_corpus[0], LambdaControl.fixed(1.2))
        assert out.count == small_corpus[0].num_frames
        assert 0 <= out.correct <= out.count

    def test_frame_level_theta_gradient(self, student, small_corpus):
        task = build_task(small_corpus, TaskLevel.Frame)
        head = DownstreamHead(student.config.model_dim, task.num_classes, 0)
        checked = 0
        for utt in small_corpus:
            ctl = LambdaControl.trainable(theta_from_lambda(1.2, LAMBDA_CEILING), LAMBDA_CEILING)
            out = student.compress(utt.features, ctl)
            if min(boundary_margin(out.alpha_mod), switch_margin(out.alpha_raw, ctl.value), out.relu_margin) < 1e-4:
                continue
            report = check_gradients(lambda: task_loss(student, head, task, utt, ctl).loss, {"theta": ctl.theta})
            assert report.passed(1e-3)
            assert report.entries[0].analytic != 0.0
            checked += 1
        assert checked > 0

    def test_evaluate(self, student, utterance_task):
        head = DownstreamHead(student.config.model_dim, utterance_task.num_classes, 0)
        loss, acc = evaluate_task(student, head, utterance_task, 1.0)
        assert loss > 0 and 0.0 <= acc <= 1.0


class TestAdapt:
    def test_zero_theta_lr_keeps_lambda(self, student, utterance_task):
        cfg = AdaptConfig(theta_lr=0.0, epochs=2, batch_size=3, lambda_init=0.8)
        report = adapt_lambda(student, utterance_task, cfg, lambda_max=1.5)
        assert report.initial_lambda == 0.8
        assert report.final_lambda == pytest.approx(0.8, abs=1e-12)
        assert all(lam == pytest.approx(0.8, abs=1e-12) for lam in report.lambda_trajectory)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_lambda_stays_in_range(self, seed, student, utterance_task):
        cfg = AdaptConfig(theta_lr=0.5, epochs=2, batch_size=2, seed=seed)
        report = adapt_lambda(student, utterance_task, cfg, lambda_max=1.5)
        assert 0.0 < report.initial_lambda < 1.5
        assert all(0.0 <= lam <= 1.5 for lam in report.lambda_trajectory)
        assert len(report.lambda_trajectory) == 2 * 3

    def test_lambda_init_outside_range(self, student, utterance_task):
        with pytest.raises(OfaConfigError):
            adapt_lambda(student, utterance_task, AdaptConfig(lambda_init=1.8, epochs=1), lambda_max=1.5)

    def test_student_not_updated(self, student, utterance_task):
        before = params_of(student)
        adapter = LambdaAdapter(student, utterance_task, AdaptConfig(epochs=1, theta_lr=0.1))
        adapter.train(0.5)
        for name, value in before.items():
            np.testing.assert_array_equal(adapter.student.parameters()[name].data, value)

    def test_grid_and_report(self, tmp_path, student, utterance_task):
        cfg = AdaptConfig(epochs=1, batch_size=3, grid_points=3)
        report = adapt_lambda(student, utterance_task, cfg, lambda_max=1.5)
        assert [p.lam for p in report.grid] == pytest.approx([1e-6, 0.5, 1.0])
        assert report.best_grid_metric == min(p.metric for p in report.grid)
        path = tmp_path / "adapt.json"
        report.save(path)
        doc = json.loads(path.read_text())
        assert doc["level"] == "utterance"
        assert len(doc["grid"]) == 3

    def test_grid_search_points(self, student, utterance_task):
        points = grid_search_lambda(student, utterance_task, [0.2, 1.2], AdaptConfig(epochs=1), lambda_max=1.5)
        assert [p.lam for p in points] == pytest.approx([0.2, 1.2])
        assert all(0.0 <= p.accuracy <= 1.0 for p in points)


def test_step_record_row():
    rec = StepRecord(3, 0.1, 0.2, 0.3, 0.4, 1.0)
    assert rec.row() == ["3", "0.1", "0.2", "0.3", "0.4", "1.0"]
