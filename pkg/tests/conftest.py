from __future__ import annotations

import os

import pytest

from bnideal.bayes import Network

# Four-node networks by their row in the golden table (children lists).
TABLE1_NETS = {
    4: [[], [1], [1], [1, 2]],
    11: [[], [1], [1], [2]],
    15: [[], [1], [1], [2, 3]],
    16: [[], [1], [1, 2], [3]],
    17: [[], [1], [2], [1, 3]],
    18: [[], [1], [2], [3]],
    21: [[], [1], [2], [2]],
    26: [[], [], [1], [2]],
    30: [[], [], [], []],
}

THREE_NODE = [
    [[], [1], [1]],
    [[], [1], [2]],
    [[], [], [1, 2]],
    [[], [], [1]],
    [[], [], []],
]

SLOW = os.environ.get("BNIDEAL_SLOW") == "1"
slow = pytest.mark.skipif(not SLOW, reason="long computation; set BNIDEAL_SLOW=1")


def net(children, levels=None) -> Network:
    return Network.from_children(children, levels)
