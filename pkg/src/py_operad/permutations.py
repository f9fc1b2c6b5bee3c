# -*- coding: utf-8 -*-
"""
对称群的组合工具

置换用元组表示，sigma[i] 为 i 的像；复合 (s∘t)[i] = s[t[i]]。
"""

from functools import lru_cache
from itertools import permutations as _permutations
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions, partitions

Perm = Tuple[int, ...]
SetPartition = Tuple[Tuple[int, ...], ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(s: Perm, t: Perm) -> Perm:
    return tuple(s[i] for i in t)


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, image in enumerate(s):
        out[image] = i
    return tuple(out)


def adjacent(n: int, i: int) -> Perm:
    """相邻对换 s_i = (i i+1)，0 起始"""
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def adjacent_word(sigma: Perm) -> List[int]:
    """
    把 sigma 写成相邻对换的乘积

    Returns:
        [i_0, i_1, ..., i_k]，满足 sigma = s_{i_k} ∘ ... ∘ s_{i_1} ∘ s_{i_0}
    """
    cur = list(sigma)
    word: List[int] = []
    while True:
        for i in range(len(cur) - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                word.append(i)
                break
        else:
            return word


def sign(sigma: Perm) -> int:
    inversions = sum(
        1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j]
    )
    return -1 if inversions % 2 else 1


def sort_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """
    Koszul 符号：把按 order 重排的分次元素排好时产生的符号

    order[j] 是第 j 个元素的新位置；每对逆序的奇数度元素贡献一个 −1。
    """
    odd = 0
    for a in range(len(order)):
        if degrees[a] % 2 == 0:
            continue
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and degrees[b] % 2:
                odd += 1
    return -1 if odd % 2 else 1


def all_permutations(n: int) -> Iterable[Perm]:
    return _permutations(range(n))


@lru_cache(maxsize=None)
def cycle_type_representative(cycle_type: Tuple[int, ...]) -> Perm:
    """给定轮换型（降序整数分拆）的代表置换：连续整数组成的轮换"""
    out: List[int] = []
    start = 0
    for length in cycle_type:
        block = list(range(start, start + length))
        out.extend(block[1:] + block[:1])
        start += length
    return tuple(out)


def cycle_types(n: int) -> List[Tuple[int, ...]]:
    """n 的全部整数分拆，降序排列；用作共轭类的索引"""
    out = []
    for part in partitions(n):
        cycle_type: List[int] = []
        for size in sorted(part, reverse=True):
            cycle_type.extend([size] * part[size])
        out.append(tuple(cycle_type))
    return sorted(out, reverse=True)


@lru_cache(maxsize=None)
def set_partitions(n: int) -> Tuple[SetPartition, ...]:
    """
    {0..n−1} 的全部集合分拆

    块内升序，块之间按最小元排序；整体按块数、再按字典序排列。
    """
    if n == 0:
        return ((),)
    found = set()
    for p in multiset_partitions(list(range(n))):
        found.add(tuple(sorted(tuple(sorted(block)) for block in p)))
    return tuple(sorted(found, key=lambda p: (len(p), p)))


def induced_order(block: Sequence[int], sigma: Perm) -> Tuple[Tuple[int, ...], Perm]:
    """
    块在 sigma 下的像，以及块内位置的诱导置换

    Returns:
        (排好序的像块, tau)，tau[a] 为 block[a] 的像在像块中的位置
    """
    image = sorted(sigma[b] for b in block)
    position: Dict[int, int] = {v: k for k, v in enumerate(image)}
    return tuple(image), tuple(position[sigma[b]] for b in block)
