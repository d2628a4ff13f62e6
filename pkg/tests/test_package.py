# Copyright 2024 ofacompress contributors. All Rights Reserved.
# Use of this source code is governed by a MIT license that can be found in the LICENSE file.
# SPDX-License-Identifier: MIT

import logging

import pytest

import ofacompress
from ofacompress import ExitCode, OfaDataError, OfaDivergenceError, RunOptions
from ofacompress.utils import component_logger, level_from_name


def test_version():
    assert ofacompress.__version__ == "0.1.0"


@pytest.mark.parametrize("name", ofacompress.__all__)
def test_exports_resolve(name):
    assert hasattr(ofacompress, name)


def test_custom_levels_registered():
    assert logging.getLevelName(ofacompress.VERBOSE) == "VERBOSE"
    assert logging.getLevelName(ofacompress.NOTICE) == "NOTICE"


def test_level_from_name():
    assert level_from_name("verbose") == ofacompress.VERBOSE
    assert level_from_name(" Debug ") == ofacompress.DEBUG
    assert level_from_name("chatty") == ofacompress.WARNING
    assert level_from_name(None, ofacompress.ERROR) == ofacompress.ERROR


def test_component_logger_level(monkeypatch):
    monkeypatch.setenv("OFA_LOGGING", "notice")
    assert component_logger("x").level == ofacompress.NOTICE
    assert component_logger("x", ofacompress.DEBUG).level == ofacompress.DEBUG
    assert RunOptions().verbose == ofacompress.NOTICE


def test_error_messages():
    err = OfaDataError("bad file", 2)
    assert err.message == "bad file (Code 2: truncated payload)"
    assert err.exit_code == ExitCode.DATA_ERROR
    div = OfaDivergenceError("loss is nan", step=3, lam=0.5)
    assert div.message == "loss is nan (step 3, lambda 0.500000)"
    assert div.exit_code == ExitCode.DIVERGENCE
    assert ExitCode.get_description(9) == "Unknown exit code: 9"
