"""f2fix: fixed subgroups, maximal outer fixed points, stable images and
twisted conjugacy for endomorphisms of the free group F(a,b)."""

__version__ = "0.1.0"
