import pytest

from dlkoszul.fpmodule import build_F_dual, sphere


@pytest.fixture(scope="session")
def f1_dual():
    return build_F_dual(1, 16)


@pytest.fixture(scope="session")
def f2_dual():
    return build_F_dual(2, 16)


def zero_connected_modules():
    """Finite unstable 0-connected modules used by the loop and delooping checks."""
    from dlkoszul.fpmodule import direct_sum
    mods = [sphere(d, 16) for d in (1, 2, 3, 5, 8)]
    mods += [build_F_dual(n, 16) for n in (1, 2, 3, 4)]
    mods.append(build_F_dual(1, 15).shift(1))
    mods.append(build_F_dual(2, 14).shift(2))
    mods.append(direct_sum(build_F_dual(1, 16), build_F_dual(2, 16), sphere(6, 16), name="mix"))
    return mods
