"""
errors declares the exceptions raised by signet components
"""

from typing import Optional


class SignetError(Exception):
    """
    SignetError is the root of all signet errors
    """


class ConfigError(SignetError):
    """
    ConfigError is raised when a configuration is invalid. It names
    the offending field
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"invalid configuration '{field}': {message}")
        self.field = field


class CorpusParseError(SignetError):
    """
    CorpusParseError is raised when a corpus line can't be parsed
    """

    def __init__(self, line: int, field: str, message: str):
        super().__init__(f"line {line}: field '{field}': {message}")
        self.line = line
        self.field = field


class BackendError(SignetError):
    """
    BackendError is raised when a backend fails after exhausting retries
    or answers with a non retryable status
    """

    def __init__(self, capability: str, message: str, attempts: int = 0):
        super().__init__(
            f"{capability} backend failed after {attempts} attempt(s):"
            f" {message}"
        )
        self.capability = capability
        self.attempts = attempts


class ProtocolError(SignetError):
    """
    ProtocolError is raised when a backend response is malformed
    """

    def __init__(self, capability: str, message: str):
        super().__init__(f"{capability} protocol error: {message}")
        self.capability = capability


class DeterminismError(SignetError):
    """
    DeterminismError is raised when a replay fixture has no recorded
    response for a request. It is never skipped by error policies
    """

    def __init__(self, capability: str, digest: str):
        super().__init__(
            f"{capability} request {digest} is missing from the replay"
            " fixture"
        )
        self.capability = capability
        self.digest = digest


class CompletionRejected(SignetError):
    """
    CompletionRejected is raised when an LLM completion is unusable
    """

    def __init__(self, model_id: str, message: str):
        super().__init__(f"completion from '{model_id}' rejected: {message}")
        self.model_id = model_id


class EmptyCompletionError(CompletionRejected):
    """
    EmptyCompletionError is raised when a completion has no text
    """


class RefusalError(CompletionRejected):
    """
    RefusalError is raised when the model refused to answer
    """


class PipelineError(SignetError):
    """
    PipelineError wraps a failure on one corpus item with its context
    """

    def __init__(
        self,
        stage: str,
        doc_id: str,
        cause: Exception,
        pair: Optional[tuple[str, str]] = None,
    ):
        where = f"{doc_id}" + (f" {pair[0]},{pair[1]}" if pair else "")
        super().__init__(f"{stage} failed for {where}: {cause}")
        self.stage = stage
        self.doc_id = doc_id
        self.pair = pair
        self.cause = cause


class NoEdgeError(SignetError):
    """
    NoEdgeError is raised when observations can't form an edge because
    none of them carries a sign
    """


class UndefinedBalanceError(SignetError, ValueError):
    """
    UndefinedBalanceError is raised when a balance index is requested
    for a graph without triangles
    """


FATAL_ERRORS = (ConfigError, DeterminismError)
