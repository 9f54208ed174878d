"""Exception types raised by lassopath.

Every error can render itself as a JSON-friendly dict so the CLI can put a
machine-readable payload on stderr.
"""


class LassoPathError(Exception):
    """Base class for all library errors."""

    def payload(self):
        return {"error": type(self).__name__, "message": str(self)}


class RankDeficient(LassoPathError):
    def __init__(self, support, ratio=None):
        self.support = tuple(int(j) for j in support)
        self.ratio = ratio
        msg = f"X_T is rank deficient on support {list(self.support)}"
        if ratio is not None:
            msg += f" (sigma_min/sigma_max = {ratio:.3e})"
        super().__init__(msg)

    def payload(self):
        out = super().payload()
        out["support"] = list(self.support)
        return out


class DegenerateProblem(LassoPathError):
    """X^t y = 0, so the solution is zero for every lambda."""


class IterationCap(LassoPathError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"path exceeded {cap} segments")

    def payload(self):
        out = super().payload()
        out["cap"] = self.cap
        return out


class OutOfRange(LassoPathError):
    pass


class SpansBreakpoint(LassoPathError):
    pass


class EmptySupport(LassoPathError):
    pass


class NotConverged(LassoPathError):
    def __init__(self, max_iter, certificate):
        self.max_iter = max_iter
        self.certificate = certificate
        super().__init__(
            f"no KKT convergence after {max_iter} iterations "
            f"(best violation {certificate.violation:.3e})"
        )


class ProblemTooLarge(LassoPathError):
    pass


class CombinatorialOverflow(LassoPathError):
    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} support pairs exceed budget {budget}")

    def payload(self):
        out = super().payload()
        out.update(count=self.count, budget=self.budget)
        return out


class ParseError(LassoPathError):
    def __init__(self, path, line, col, reason):
        self.path, self.line, self.col = str(path), line, col
        super().__init__(f"{path}:{line}:{col}: {reason}")
