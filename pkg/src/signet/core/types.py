"""
types provides the enumerations shared across signet components and
used in files written by the pipeline
"""

from enum import Enum


class RelationLabel(str, Enum):
    """
    RelationLabel lists the classes a pair relationship can take
    """

    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value

    @property
    def value_numeric(self) -> int | None:
        """
        Property that holds the sign of a label, None for unknown
        """
        signs = {
            RelationLabel.POSITIVE: 1,
            RelationLabel.NEGATIVE: -1,
            RelationLabel.NEUTRAL: 0,
            RelationLabel.UNKNOWN: None,
        }
        return signs[self]

    @property
    def flipped(self) -> "RelationLabel":
        """
        Property that swaps positive and negative labels
        """
        return {
            RelationLabel.POSITIVE: RelationLabel.NEGATIVE,
            RelationLabel.NEGATIVE: RelationLabel.POSITIVE,
        }.get(self, self)

    @classmethod
    def from_string(cls, label: str):
        """
        Get the enum member corresponding to the given string.

        :param label: The string representation of the label.
        :return: The corresponding RelationLabel enum member.
        :raises ValueError: If the string does not match any enum member.
        """
        normalized = label.strip().lower()
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"'{label}' is not a valid {cls.__name__}")


THREE_CLASSES = [
    RelationLabel.POSITIVE,
    RelationLabel.NEGATIVE,
    RelationLabel.NEUTRAL,
]
FOUR_CLASSES = THREE_CLASSES + [RelationLabel.UNKNOWN]


class Capability(str, Enum):
    """
    Capability describes the remote model capabilities of the gateway
    """

    NER = "ner"
    ZSC = "zsc"
    LLM = "llm"

    def __str__(self):
        return self.value


class GatewayMode(str, Enum):
    """
    GatewayMode selects how backends reach their models
    """

    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"

    def __str__(self):
        return self.value


class ErrorPolicy(str, Enum):
    """
    ErrorPolicy governs what happens to per-item failures
    """

    FAIL = "fail"
    SKIP = "skip"

    def __str__(self):
        return self.value


class Method(str, Enum):
    """
    Method tells which pipeline produced an observation
    """

    ZSC = "zsc"
    LLM = "llm"

    def __str__(self):
        return self.value


class PremiseSource(str, Enum):
    """
    PremiseSource selects the text fed to classifiers and recognizers
    """

    HEADLINE = "headline"
    HEADLINE_SUMMARY = "headline_summary"

    def __str__(self):
        return self.value


class PairScope(str, Enum):
    """
    PairScope selects which entity pairs of a document are classified
    """

    ALL = "all"
    FOCAL = "focal"

    def __str__(self):
        return self.value


class Weighting(str, Enum):
    """
    Weighting selects the edge aggregation rule
    """

    CONFIDENCE = "confidence"
    SIGN = "sign"

    def __str__(self):
        return self.value


class ExportFormat(str, Enum):
    """
    ExportFormat lists the snapshot export formats
    """

    JSON = "json"
    DOT = "dot"
    GRAPHML = "graphml"

    def __str__(self):
        return self.value


class PredictedSign(str, Enum):
    """
    PredictedSign is the outcome of a balance based sign prediction
    """

    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value

    @property
    def value_numeric(self) -> int | None:
        """
        Property that holds the integer value of a prediction
        """
        return {
            PredictedSign.POSITIVE: 1,
            PredictedSign.NEGATIVE: -1,
            PredictedSign.UNKNOWN: None,
        }[self]
