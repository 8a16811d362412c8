"""Exception types shared across the package.

Every error that crosses a module boundary lives here so callers can catch
one family per subsystem instead of chasing ad-hoc exceptions.
"""


class QCaptionError(Exception):
    """Base class for all package errors."""


# --- media decoding -------------------------------------------------------

class DecodeError(QCaptionError):
    """The decoder subprocess failed or produced unusable output.

    Carries a short excerpt of the decoder's stderr when available.
    """

    def __init__(self, message: str, stderr: str = ""):
        excerpt = stderr.strip()[-400:]
        super().__init__(f"{message}: {excerpt}" if excerpt else message)
        self.stderr = excerpt


class TimestampOutOfRange(QCaptionError):
    """Requested timestamp outside the decodable range [0, duration)."""


# --- frame selection ------------------------------------------------------

class DimensionMismatch(QCaptionError):
    """Two images that must share dimensions do not."""


class TooFewPoints(QCaptionError):
    """k-means asked for more clusters than there are points."""


# --- model backends -------------------------------------------------------

class BackendError(QCaptionError):
    """Base class for model-backend failures."""


class BackendTimeout(BackendError):
    """Request timed out after exhausting retries."""


class HttpError(BackendError):
    """Non-success HTTP status from the model server."""

    def __init__(self, status: int, body: str = ""):
        super().__init__(f"HTTP {status}: {body.strip()[:300]}")
        self.status = status
        self.body = body


class RateLimited(HttpError):
    """HTTP 429 persisted through the backoff schedule."""

    def __init__(self, body: str = ""):
        super().__init__(429, body)


class ContextTooLong(BackendError):
    """Server rejected the prompt as exceeding the model context."""


class MalformedResponse(BackendError):
    """Response parsed as JSON but the assistant content is missing/empty."""


class UnsupportedByServer(BackendError):
    """Endpoint rejected a payload kind it does not support (e.g. video)."""


class ScriptExhausted(BackendError):
    """Strict scripted mock received a request with no matching entry."""


# --- fusion pipeline ------------------------------------------------------

class AllFramesFailed(QCaptionError):
    """Every per-frame caption request errored; nothing to aggregate."""


class TemplateError(QCaptionError):
    """Prompt template contains an unknown placeholder."""


# --- evaluation -----------------------------------------------------------

class EmptyCorpus(QCaptionError):
    """Metric asked to run over zero videos."""


class JudgeUnparseable(BackendError):
    """Judge reply could not be parsed even after the format-nudge retry."""


# --- datasets -------------------------------------------------------------

class SchemaError(QCaptionError):
    """A manifest or annotation line violates the documented schema."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class DuplicateKey(SchemaError):
    """Two manifest tasks share the same (video_id, question) key."""


class MissingVideo(SchemaError):
    """Strict manifest load found a task whose video file does not exist."""


class UnmatchedQuestionId(SchemaError):
    """QA converter found a question id with no answer (or vice versa)."""


# --- harness --------------------------------------------------------------

class MissingBaseline(QCaptionError):
    """compare_runs could not find the named baseline row."""
