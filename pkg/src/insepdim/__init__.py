"""Exact computations around inseparable field extensions and the truncated
polynomial algebras Lambda_{n,e} = (k[x_1..x_r]/(x_i^(p^e_i)))^n."""

__version__ = "0.1.0"
