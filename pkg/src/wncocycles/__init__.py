"""Gelfand-Fuks cochains of formal vector fields, their characteristic forms, and group cocycles."""

from .dg import Form, MatrixForm, parse_form, render, wedge
from .wn import WnComplex, FormalVectorField, evaluate_cochain, ce_differential_oracle
from .charforms import CharTable
from .relative import LinearFieldBasis, is_relative, is_o_relative
from .vey import VeyTuple, dimension_table, enumerate_basis
from .dsl import DiffeoExpr, parse, derivative, compose, validate
from .cocycles import QuadratureConfig, gv_cocycle, bott_cocycle, coboundary, GroupCochain

__version__ = "0.1.0"

__all__ = [
    "Form", "MatrixForm", "parse_form", "render", "wedge",
    "WnComplex", "FormalVectorField", "evaluate_cochain", "ce_differential_oracle",
    "CharTable", "LinearFieldBasis", "is_relative", "is_o_relative",
    "VeyTuple", "dimension_table", "enumerate_basis",
    "DiffeoExpr", "parse", "derivative", "compose", "validate",
    "QuadratureConfig", "gv_cocycle", "bott_cocycle", "coboundary", "GroupCochain",
]
