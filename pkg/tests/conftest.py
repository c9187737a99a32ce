#!/usr/bin/env python3

import os

import pytest

assertion_count = 0


def pytest_assertion_pass(item, lineno, orig, expl):
    global assertion_count
    assertion_count += 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    print(f'{assertion_count} assertions tested.')


def pytest_configure(config):
    # register additional markers
    config.addinivalue_line("markers", "parallel: mark test to run parallelized with xdist")
    config.addinivalue_line("markers", "slow: mark test that takes minutes, enabled with CLAMPED_TONES_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.environ.get('CLAMPED_TONES_SLOW', '') == '1':
        return
    skipSlow = pytest.mark.skip(reason="Set CLAMPED_TONES_SLOW=1 to run slow reproductions.")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skipSlow)
