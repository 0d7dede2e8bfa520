"""Exception types raised across the riskminer package."""


class RiskminerError(Exception):
    """Base class for all riskminer errors."""


class ConfigError(RiskminerError):
    """Invalid configuration (bad ratios, unknown learner, malformed config file)."""


class DataError(RiskminerError):
    """Invalid input data (CSV contract violations, domain violations)."""


class StageError(RiskminerError):
    """A pipeline stage failed; carries the stage name and the original cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


# -- data-model ----------------------------------------------------------

class MissingColumnError(DataError):
    def __init__(self, column: str):
        super().__init__(f"missing column: {column!r}")
        self.column = column


class HeaderMismatchError(DataError):
    """Header present but does not match schema order / has extras."""


class IllegalValueError(DataError):
    def __init__(self, row: int, column: str, value):
        super().__init__(f"illegal value {value!r} for column {column!r} on data row {row}")
        self.row = row
        self.column = column
        self.value = value


class RaggedRowError(DataError):
    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"data row {row} has {got} cells, expected {expected}")
        self.row = row


class RatioSumError(ConfigError):
    def __init__(self, ratios):
        super().__init__(f"split ratios must be positive and sum to 1, got {ratios}")


class EmptyClassError(DataError):
    def __init__(self, label: int):
        super().__init__(f"stratified split requires every class present; class {label} is empty")
        self.label = label


# -- augmentation --------------------------------------------------------

class PoolTooSmallError(DataError):
    def __init__(self, k: int, pool: int):
        super().__init__(f"need k={k} neighbours but the eligible pool has {pool} records")


class ClassTooSmallError(DataError):
    def __init__(self, label: int, size: int, k: int):
        super().__init__(f"class {label} has {size} records; growing it requires at least k+1={k + 1}")
        self.label = label


class TargetBelowCurrentError(ConfigError):
    def __init__(self, label: int, target: int, current: int):
        super().__init__(f"target {target} for class {label} is below its current count {current}")


# -- feature analysis ----------------------------------------------------

class UnknownFeatureError(DataError):
    def __init__(self, name: str):
        super().__init__(f"unknown feature: {name!r}")
        self.name = name


class DegenerateTableError(DataError):
    """Dropping empty rows/columns left fewer than 2 rows or 2 columns."""


# -- classifiers ---------------------------------------------------------

class EmptyNodeError(RiskminerError):
    """Impurity requested for an empty class-count vector."""


class SingleClassError(DataError):
    def __init__(self, kind: str):
        super().__init__(f"{kind} requires both classes in the training data")


class FeatureMismatchError(RiskminerError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"model was fit on {expected} features, record has {got}")


# -- rule mining ---------------------------------------------------------

class UnmappedFeatureError(DataError):
    def __init__(self, name: str):
        super().__init__(f"record does not cover mapped feature {name!r}")


class ZeroAntecedentSupportError(DataError):
    def __init__(self):
        super().__init__("rule antecedent occurs in no transaction")
