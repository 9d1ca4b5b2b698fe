"""Storage service for cached sequence windows."""
import os
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import CacheFormatError, CacheWriteError, ParameterError
from app.core.logging import get_logger
from app.schemas.report import CacheRecord
from app.schemas.sequence import ExactValue, SequenceId, SequenceWindow
from app.services.sequence_service import get_sequence_service, make_sequence_id

logger = get_logger(__name__)

CACHE_SUFFIX = ".cache"


class LocalStorageService:
    """Line-oriented ``family|params|n|value`` files on the local filesystem.

    One writer per file; a file is replaced atomically on save.
    """

    def __init__(self, base_path: Optional[str] = None):
        self.base_path = Path(base_path or settings.CACHE_DIR)

    def window_path(self, id: SequenceId, start: int, stop: int) -> Path:
        """Default location: base_path / <family>[_r-2-2]_<start>-<last>.cache."""
        name = id.family.value
        if id.r:
            name += "_r-" + "-".join(str(x) for x in id.r)
        return self.base_path / f"{name}_{start}-{stop - 1}{CACHE_SUFFIX}"

    def save_window(self, window: SequenceWindow, path: Optional[Union[str, Path]] = None) -> Path:
        target = Path(path) if path is not None else self.window_path(window.id, window.start, window.stop)
        lines = [
            CacheRecord(
                family=window.id.family,
                params=window.id.params,
                index=window.start + offset,
                value=value.render(),
            ).render()
            for offset, value in enumerate(window.values)
        ]
        tmp = target.with_name(target.name + ".tmp")
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
            os.replace(tmp, target)
        except OSError as e:
            logger.error("cache_write_failed", path=str(target), error=str(e))
            try:
                tmp.unlink(missing_ok=True)
            except OSError:
                pass
            raise CacheWriteError(f"could not save window to {target}: {e}", str(target)) from e
        logger.info("window_saved", path=str(target), sequence=window.id.label, count=len(lines))
        return target

    def load_window(self, path: Union[str, Path], verify: bool = False) -> SequenceWindow:
        """Parse and validate a cache file.

        Records must share one family and parameter string and carry
        contiguous increasing indices. With ``verify`` every value is
        recomputed and compared.
        """
        source = Path(path)
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as e:
            raise CacheFormatError(f"cannot read cache file {source}: {e}") from e

        records: List[CacheRecord] = []
        values: List[ExactValue] = []
        for line_number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = CacheRecord.parse(line)
            except (ValueError, ValidationError) as e:
                raise CacheFormatError(f"malformed record {line!r}: {_first_error(e)}", line_number=line_number) from e
            if records:
                head = records[0]
                if (record.family, record.params) != (head.family, head.params):
                    raise CacheFormatError(
                        f"record for {record.family.value}|{record.params} in a "
                        f"{head.family.value}|{head.params} file",
                        line_number=line_number,
                    )
                expected = records[-1].index + 1
                if record.index > expected:
                    raise CacheFormatError(f"index gap: missing index {expected}", line_number=line_number, index=expected)
                if record.index < expected:
                    raise CacheFormatError(
                        f"index {record.index} out of order (expected {expected})",
                        line_number=line_number,
                        index=record.index,
                    )
            try:
                values.append(record.exact_value())
            except ValueError as e:
                raise CacheFormatError(str(e), line_number=line_number, index=record.index) from e
            records.append(record)

        if not records:
            raise CacheFormatError(f"cache file {source} holds no records")

        head = records[0]
        try:
            id = make_sequence_id(head.family.value, head.params or None)
        except ParameterError as e:
            raise CacheFormatError(e.message, line_number=1) from e

        try:
            window = SequenceWindow(id=id, start=head.index, values=values)
        except ValidationError as e:
            raise CacheFormatError(_first_error(e), line_number=1, index=head.index) from e

        if verify:
            self._cross_check(window)
        logger.info("window_loaded", path=str(source), sequence=id.label, count=len(values), verified=verify)
        return window

    @staticmethod
    def _cross_check(window: SequenceWindow):
        sequences = get_sequence_service()
        for offset, value in enumerate(window.values):
            n = window.start + offset
            expected = sequences.term(window.id, n)
            if expected.as_fraction() != value.as_fraction():
                raise CacheFormatError(
                    f"{window.id.label} at n={n}: cached {value.render()}, generated {expected.render()}",
                    line_number=offset + 1,
                    index=n,
                )


def _first_error(e: Exception) -> str:
    if isinstance(e, ValidationError):
        errors = e.errors()
        if errors:
            return errors[0].get("msg", str(e))
    return str(e)


def get_storage_service(base_path: Optional[str] = None) -> LocalStorageService:
    """Factory function to get the window cache."""
    return LocalStorageService(base_path)
