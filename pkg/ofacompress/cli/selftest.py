# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

"""
One-command acceptance checks.

The quick suite covers the α-modification algebra, integrate-and-fire against a
direct accumulate-and-split simulation, end-to-end gradients, the MACs model,
guidance independence from λ and feature file round trips. ``full`` adds the
training protocols: OFA against fixed-λ specialists and adaptive λ against a
grid search.
"""

import tempfile
import time
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..alphamod import LAMBDA_CEILING, LambdaControl, modify_alpha, switch_margin, theta_from_lambda
from ..cif import boundary_margin, fire_count, integrate_and_fire, pool_segments, pool_teacher
from ..data_io import FeatureSequence, GuidanceTargets, SyntheticSpec, generate_corpus, read_features, write_features
from ..diffmath import GradCheckReport, Matrix, check_gradients
from ..model import ModelConfig, StudentModel, TeacherModel
from ..errors import OfaCompressError
from ..profile import MacsConfig, count_model_macs, macs_config_for, reduction_at_period, transformer_macs
from ..training import (
    AdaptConfig,
    GuidanceMode,
    TaskLevel,
    TrainConfig,
    adapt_lambda,
    boundary_bce,
    build_task,
    compare_with_specialists,
    distill_loss,
    grid_search_lambda,
    ofa_pretrain,
    quantity_loss,
    total_loss,
)
from ..utils import verboselogs

GRADIENT_MARGIN = 1e-3


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SelftestReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def reference_cif(
    alpha: np.ndarray, threshold: float = 1.0, tail_threshold: float = 0.5, eps: float = 1e-9
) -> Tuple[List[Tuple[int, float, float, bool, bool]], List[Dict[int, float]]]:
    """
    Direct simulation of accumulate-and-split: the events as
    ``(frame, left, residual, is_tail, forced)`` and each segment's frame weights.
    """
    events: List[Tuple[int, float, float, bool, bool]] = []
    segments: List[Dict[int, float]] = [{}]
    acc = 0.0
    for t, a in enumerate(alpha.tolist()):
        if acc + a >= threshold - eps:
            left = min(threshold - acc, a)
            segments[-1][t] = left
            events.append((t, left, a - left, False, False))
            segments.append({t: a - left})
            acc = a - left
        else:
            segments[-1][t] = segments[-1].get(t, 0.0) + a
            acc += a
    last = len(alpha) - 1
    open_segment = segments.pop()
    if acc >= tail_threshold:
        events.append((last, acc, 0.0, True, False))
        segments.append(open_segment)
    elif not events:
        events.append((last, acc, 0.0, True, True))
        segments.append(open_segment)
    return events, segments


def reference_pool(features: np.ndarray, segments: List[Dict[int, float]]) -> np.ndarray:
    out = np.zeros((len(segments), features.shape[1]))
    for k, weights in enumerate(segments):
        frames = range(min(weights), max(weights) + 1)
        total = sum(weights.get(t, 0.0) for t in frames)
        for t in frames:
            w = weights.get(t, 0.0) if total > 0 else 1.0 / len(frames)
            out[k] += w * features[t]
    return out


def check_alpha_algebra(num_alpha: int = 1000, num_lambdas: int = 50, seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    lambdas = np.linspace(0.0, LAMBDA_CEILING, num_lambdas)
    for _ in range(num_alpha):
        alpha = rng.uniform(0.0, 1.0, size=int(rng.integers(1, 65)))
        if not np.array_equal(modify_alpha(alpha, 1.0).data[:, 0], alpha):
            return "identity at lambda=1 failed"
        gap = np.max(np.abs(modify_alpha(alpha, 1 - 1e-6).data - modify_alpha(alpha, 1 + 1e-6).data))
        if gap > 1e-5:
            return f"discontinuity {gap:.3g} at lambda=1"
        prev_mass, prev_fires = np.inf, np.inf
        for lam in lambdas:
            mod = modify_alpha(alpha, lam).data[:, 0]
            if mod.min() < 0.0 or mod.max() > 1.0:
                return f"value outside [0,1] at lambda={lam}"
            mass, fires = mod.sum(), fire_count(mod)
            if mass > prev_mass + 1e-12 or fires > prev_fires:
                return f"mass or fire count increased at lambda={lam}"
            prev_mass, prev_fires = mass, fires
        if fire_count(modify_alpha(alpha, 0.0)) != alpha.size or fire_count(modify_alpha(alpha, LAMBDA_CEILING)) != 1:
            return "fire-count endpoints wrong"
    return ""


def check_cif_oracle(num_cases: int = 500, seed: int = 1) -> str:
    worked = pool_segments(Matrix.column([1.0, 2.0, 3.0, 4.0]), [0.4, 0.5, 0.3, 0.6], integrate_and_fire([0.4, 0.5, 0.3, 0.6]))
    if not np.allclose(worked.frames.data[:, 0], [1.7, 3.0], atol=1e-12):
        return f"worked example gave {worked.frames.data[:, 0]}"
    rng = np.random.default_rng(seed)
    for case in range(num_cases):
        t_len = int(rng.integers(1, 17))
        alpha = rng.uniform(0.0, 1.0, size=t_len)
        if case % 5 == 0:
            alpha[rng.uniform(size=t_len) < 0.3] = 0.0
        feats = rng.normal(size=(t_len, 3))
        seg = integrate_and_fire(alpha)
        events, segments = reference_cif(alpha)
        got = [(e.fire_frame, e.left_weight, e.residual, e.is_tail, e.forced) for e in seg.events]
        if got != events:
            return f"case {case}: events differ"
        pooled = pool_segments(Matrix(feats), alpha, seg).frames.data
        if not np.allclose(pooled, reference_pool(feats, segments), rtol=0, atol=1e-12):
            return f"case {case}: pooled output differs"
    return ""


def gradient_case(seed: int, max_entries: int = 3) -> Optional[GradCheckReport]:
    """
    End-to-end gradient check over every parameter group and θ, or ``None``
    when the seeded point lies within the margin of a kink.
    """
    rng = np.random.default_rng(seed)
    cfg = ModelConfig(seed=seed)
    student, teacher = StudentModel(cfg), TeacherModel(cfg)
    t_len = int(rng.integers(6, 13))
    feats = FeatureSequence(rng.normal(size=(t_len, cfg.input_dim)))
    targets = GuidanceTargets((rng.uniform(size=t_len) < 0.3).astype(np.uint8))
    lam_ctl = LambdaControl.trainable(theta_from_lambda(float(rng.uniform(0.05, 1.95)), LAMBDA_CEILING), LAMBDA_CEILING)
    teacher_layers = teacher.forward(feats)

    def loss_parts():
        out = student.forward(feats, lam_ctl)
        pooled = pool_teacher(teacher_layers, out.alpha_mod, out.segmentation)
        loss = total_loss(
            distill_loss(out.head_outputs, pooled),
            boundary_bce(out.alpha_raw, targets),
            quantity_loss(out.alpha_raw, targets.num_segments),
            GuidanceMode.Both,
        )
        return out, pooled, loss

    out, pooled, _ = loss_parts()
    l1_gap = min(float(np.min(np.abs(h.frames.data - p.frames.data))) for h, p in zip(out.head_outputs, pooled))
    margins = (
        boundary_margin(out.alpha_mod),
        switch_margin(out.alpha_raw, lam_ctl.value),
        out.relu_margin,
        abs(float(out.alpha_raw.data.sum()) - targets.num_segments),
        l1_gap * 10,
    )
    if min(margins) < GRADIENT_MARGIN:
        return None
    params = dict(student.parameters())
    params["theta"] = lam_ctl.theta
    return check_gradients(lambda: loss_parts()[2], params, floor=1e-8, max_entries=max_entries, rng=rng)


def check_gradient_fidelity(num_cases: int = 5, seed: int = 100) -> str:
    accepted, candidate = 0, seed
    while accepted < num_cases and candidate < seed + 20 * num_cases:
        report = gradient_case(candidate)
        candidate += 1
        if report is None:
            continue
        accepted += 1
        if not report.passed(1e-3):
            worst = report.worst()
            return f"seed {candidate - 1}: {worst.name}{worst.index} rel error {worst.rel_error:.3g}"
    if accepted < num_cases:
        return f"only {accepted} of {num_cases} cases cleared the margin filter"
    return ""


def check_macs() -> str:
    ref = MacsConfig()
    r90, r960 = reduction_at_period(90.0, ref), reduction_at_period(960.0, ref)
    if abs(r90 - 0.687) > 0.05 or abs(r960 - 0.906) > 0.05:
        return f"reference reductions {r90:.3f} and {r960:.3f}"
    student = StudentModel(ModelConfig())
    cfg = macs_config_for(student.config)
    for n, t_len in ((1, 1), (7, 20), (64, 64)):
        expected = transformer_macs(n, cfg, alpha_frames=t_len).total
        if count_model_macs(student, n, t_len) != expected:
            return f"brute-force count differs at n={n}"
    return ""


def check_guidance_independence(seed: int = 3) -> str:
    corpus = generate_corpus(SyntheticSpec(num_utterances=3, seed=seed))
    student = StudentModel(ModelConfig())
    for utt in corpus:
        values = set()
        for lam in (0.0, 0.7, 1.0, 1.3, 1.9):
            out = student.forward(utt.features, LambdaControl.fixed(lam))
            values.add((boundary_bce(out.alpha_raw, utt.targets).item(), quantity_loss(out.alpha_raw, utt.targets.num_segments).item()))
        if len(values) != 1:
            return f"{utt.name}: guidance changed with lambda"
    return ""


def check_io_roundtrip(num_files: int = 100, seed: int = 4) -> str:
    rng = np.random.default_rng(seed)
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(num_files):
            t_len, dim = int(rng.integers(1, 65)), int(rng.integers(1, 9))
            values = rng.normal(size=(t_len, dim)).astype(np.float32).astype(np.float64)
            seq = FeatureSequence(values)
            targets = GuidanceTargets(rng.integers(0, 2, size=t_len)) if i % 2 else None
            path = Path(tmp) / f"{i}.ofaf"
            write_features(path, seq, targets)
            back, back_targets = read_features(path)
            if not np.array_equal(back.values, values) or (targets is None) != (back_targets is None):
                return f"file {i} did not round-trip"
            if targets is not None and not np.array_equal(back_targets.boundaries, targets.boundaries):
                return f"file {i} boundaries did not round-trip"
    return ""


def check_ofa_vs_specialists(seed: int = 5) -> str:
    corpus = generate_corpus(SyntheticSpec(num_utterances=100, seed=seed))
    config = TrainConfig(steps=150, batch_size=8, seed=seed)
    rows = compare_with_specialists(config, corpus, StudentModel(config.model), TeacherModel(config.model))
    bad = [r for r in rows if r.ratio > 1.5]
    summary = ", ".join(f"{r.lam:g}: {r.ratio:.2f}" for r in rows)
    return f"ratios above 1.5 ({summary})" if bad else ""


def check_adaptive_lambda(seed: int = 6) -> str:
    corpus = generate_corpus(SyntheticSpec(num_utterances=60, max_frames=40, seed=seed))
    config = TrainConfig(steps=100, seed=seed)
    student = ofa_pretrain(config, corpus, StudentModel(config.model), TeacherModel(config.model)).student
    grid = (np.arange(20) * (LAMBDA_CEILING / 20)).tolist()
    learned = {}
    for level in (TaskLevel.Utterance, TaskLevel.Frame):
        task = build_task(corpus, level)
        base = AdaptConfig(level=level, theta_lr=0.05, epochs=8, rate_weight=0.05, seed=seed)
        best = min(p.metric for p in grid_search_lambda(student, task, grid, base))
        finals = []
        for init in range(3):
            report = adapt_lambda(student, task, replace(base, seed=seed + init))
            if report.final_metric > 1.1 * best:
                return f"{level}: metric {report.final_metric:.4f} not within 10% of grid optimum {best:.4f}"
            finals.append(report.final_lambda)
        learned[level] = float(np.mean(finals))
    if learned[TaskLevel.Frame] >= learned[TaskLevel.Utterance]:
        return (
            f"frame-level lambda {learned[TaskLevel.Frame]:.3f} "
            f"not below utterance-level {learned[TaskLevel.Utterance]:.3f}"
        )
    return ""


QUICK_CHECKS: List[Tuple[str, Callable[[], str]]] = [
    ("alpha modification algebra", check_alpha_algebra),
    ("integrate-and-fire oracle", check_cif_oracle),
    ("gradient fidelity", check_gradient_fidelity),
    ("MACs model", check_macs),
    ("guidance independence", check_guidance_independence),
    ("feature file round trip", check_io_roundtrip),
]

FULL_CHECKS: List[Tuple[str, Callable[[], str]]] = [
    ("gradient fidelity, 50 cases", partial(check_gradient_fidelity, num_cases=50, seed=1000)),
    ("OFA vs fixed-lambda specialists", check_ofa_vs_specialists),
    ("adaptive lambda vs grid search", check_adaptive_lambda),
]


def run_selftest(full: bool = False, verbose: Optional[int] = None) -> SelftestReport:
    logger = verboselogs.component_logger(__name__, verbose)
    logger.debug("run_selftest ENTER")
    report = SelftestReport()
    for name, check in QUICK_CHECKS + (FULL_CHECKS if full else []):
        start = time.perf_counter()
        try:
            detail = check()
        except OfaCompressError as e:
            detail = f"raised {type(e).__name__}: {e.message}"
        result = CheckResult(name, detail == "", detail, time.perf_counter() - start)
        report.checks.append(result)
        if result.passed:
            logger.success("PASS %s (%.1fs)", name, result.seconds)
        else:
            logger.error("FAIL %s: %s", name, detail)
    logger.debug("run_selftest LEAVE")
    return report
