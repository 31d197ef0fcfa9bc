"""Exception hierarchy shared by every module.

Each error carries a short machine-readable ``kind`` so the CLI can emit
structured failures without string matching.
"""


class EvalPresError(Exception):
    kind = "error"

    def to_dict(self):
        return {"error": self.kind, "message": str(self)}


class OracleContractViolation(EvalPresError):
    kind = "oracle-contract-violation"


class SearchBudgetExhausted(EvalPresError):
    kind = "search-budget-exhausted"

    def __init__(self, message, certified=None):
        super().__init__(message)
        # deepest precision that was certified before the budget ran out
        self.certified = certified

    def to_dict(self):
        d = super().to_dict()
        d["certified"] = self.certified
        return d


class MissingVariable(EvalPresError):
    kind = "missing-variable"


class MissingTBF(EvalPresError):
    kind = "missing-tbf"


class MissingUnitName(EvalPresError):
    kind = "missing-unit-name"


class PrecisionLimit(EvalPresError):
    kind = "precision-limit"


class ManifestError(EvalPresError):
    kind = "bad-manifest"
