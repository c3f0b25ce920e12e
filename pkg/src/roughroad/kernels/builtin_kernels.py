from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .base_kernel import KernelSpec


class PolynomialKernel(KernelSpec):
    """omega_eta(y) = p(y / eta) / eta with p a polynomial on [0, 1].

    The cell weights are integrals of a polynomial, so the antiderivative
    gives them exactly.
    """

    kind = "custom-polynomial"

    def __init__(self, eta: float, coefficients: Sequence[float] = (), **kwargs):
        super().__init__(eta, coefficients=[float(c) for c in coefficients], **kwargs)
        if not coefficients:
            raise ValueError("A polynomial kernel needs coefficients")
        self.shape = Polynomial(coefficients)
        self.shape_integral = self.shape.integ(lbnd=0.0)

    def density(self, y):
        return self.shape(np.asarray(y) / self.eta) / self.eta

    def antiderivative(self, y):
        return self.shape_integral(np.asarray(y) / self.eta)


class LinearDecreasingKernel(PolynomialKernel):
    """omega(y) = 2 (eta - y) / eta^2, the kernel of the worked examples."""

    kind = "linear-decreasing"

    def __init__(self, eta: float, **kwargs):
        super().__init__(eta, coefficients=(2.0, -2.0), **kwargs)
        self.config.pop("coefficients")


class ConstantKernel(PolynomialKernel):
    """omega(y) = 1 / eta; a uniform average over the look-ahead window."""

    kind = "constant"
    requires_endpoint_zero = False

    def __init__(self, eta: float, **kwargs):
        super().__init__(eta, coefficients=(1.0,), **kwargs)
        self.config.pop("coefficients")
