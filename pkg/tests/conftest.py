import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from stackgame import parse, reindex, leaf, node

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
GAMES = os.path.join(REPO, "games")


def game_path(name: str) -> str:
    return os.path.join(GAMES, name)


def read_game(name: str) -> str:
    with open(game_path(name), "r", encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture
def doomsday():
    return parse(read_game("doomsday.game"), name="doomsday")


@pytest.fixture
def fig2():
    return parse(read_game("fig2.game"), name="fig2")


@pytest.fixture
def doomsday_tree(doomsday):
    return doomsday.root


@pytest.fixture
def fig2_tree(fig2):
    return fig2.root
