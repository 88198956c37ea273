import logging
import sys
from typing import Any

FIELDS = 'fields'


class KeyValueFormatter(logging.Formatter):
    """
    Formats records as a single ``key=value`` line.
    Structured fields travel in ``extra={'fields': {...}}`` and are appended after the message.
    """

    def format(
        self,
        record: logging.LogRecord
    ) -> str:

        parts = [
            f"ts={self.formatTime(record=record, datefmt='%Y-%m-%dT%H:%M:%S')}",
            f"level={record.levelname.lower()}",
            f"logger={record.name}",
            f"msg={_quote(value=record.getMessage())}",
        ]

        for key, value in getattr(record, FIELDS, {}).items():
            parts.append(f"{key}={_quote(value=value)}")

        if record.exc_info:
            parts.append(f"exc={_quote(value=self.formatException(record.exc_info))}")

        return ' '.join(parts)


def _quote(value: Any) -> str:

    if isinstance(value, float):
        return f"{value:.6g}"

    text = str(value)

    if not text or any(c in text for c in ' ="\n'):
        return '"' + text.replace('\\', '\\\\').replace('"', '\\"').replace('\n', '\\n') + '"'

    return text


def fields(**kwargs: Any) -> dict[str, dict[str, Any]]:
    """
    Builds the ``extra`` mapping carrying structured fields for a log call.

    :param kwargs: The structured fields.
    :return: A mapping suitable for the ``extra`` argument of ``logging.Logger`` methods.
    """

    return {FIELDS: kwargs}


def configure_logging(
    level: int | str = logging.INFO,
    stream=None
) -> None:
    """
    Installs a single key=value stream handler on the root logger, replacing any handler installed before.

    :param level: The root logging level.
    :param stream: The destination stream, ``sys.stderr`` by default.
    :return: ``None``
    """

    handler = logging.StreamHandler(stream=stream or sys.stderr)
    handler.setFormatter(KeyValueFormatter())

    root = logging.getLogger()

    for existing in list(root.handlers):
        root.removeHandler(existing)

    root.addHandler(handler)
    root.setLevel(level)
