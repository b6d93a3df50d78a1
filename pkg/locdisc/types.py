from typing import Literal, Union

Side = Literal['A', 'B']
"""A party of the bipartite system"""

Label = Union[int, str]
"""A POVM outcome: an integer or the inconclusive marker"""
