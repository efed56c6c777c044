"""Printer reproducing the notation of the bound reports."""
import math

from sympy import Float, Rational, S
from sympy.printing.precedence import PRECEDENCE, precedence
from sympy.printing.str import StrPrinter

# Significant digits of every number in a report
DIGITS = 12


def format_number(value, digits=DIGITS):
    """Format a number with a fixed count of significant digits.

    Infinities print as ``inf`` and ``-inf``, integers below ``10^digits``
    without an exponent.

    :param value: The number.
    :type value: float or int

    :param digits: Significant digits.
    :type digits: int, optional

    :rtype: str
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"

    text = f"{value:.{digits}g}"

    return "0" if text == "-0" else text


class ReportPrinter(StrPrinter):
    """String printer writing ``x^a`` for powers and numbers with a fixed
    count of significant digits.

    Statistic symbols print under their names, such as
    ``||deg_R(Y|X)||_2``.
    """

    def __init__(self, settings=None, digits=DIGITS):
        self._digits = digits

        super().__init__(settings)

    def _print_Float(self, expr):

        return format_number(expr, self._digits)

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.as_base_exp()

        if exponent is S.One:
            return self._print(base)
        if exponent is S.NegativeOne:
            return f"1/{self.parenthesize(base, PRECEDENCE['Pow'])}"

        base_text = self.parenthesize(base, PRECEDENCE["Pow"])
        if isinstance(exponent, Rational) and exponent.q == 1:
            return f"{base_text}^{exponent.p}"
        if isinstance(exponent, Float):
            return f"{base_text}^{self._print_Float(exponent)}"

        return f"{base_text}^({self._print(exponent)})"

    def _print_Mul(self, expr):
        factors = expr.as_ordered_factors()
        if expr.could_extract_minus_sign() or any(f.is_Number
                                                  for f in factors):
            return super()._print_Mul(expr)

        return " ".join(self.parenthesize(factor, precedence(expr))
                        for factor in factors)


def report_str(expr, digits=DIGITS):
    """Print an expression with :class:`ReportPrinter`."""
    return ReportPrinter(digits=digits).doprint(expr)
