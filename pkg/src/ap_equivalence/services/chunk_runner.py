import logging
import threading
from typing import Callable, List, Optional, Sequence, TypeVar

from ap_equivalence.config import get_settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def run_in_chunks(work: Callable[[Sequence[T]], List[R]], items: Sequence[T], num_threads: Optional[int] = None) -> List[R]:
    """Apply work to contiguous chunks of items on threads; results come back in item order."""
    num_threads = num_threads or get_settings().num_threads
    if not items:
        return []
    chunk_size = max(1, -(-len(items) // num_threads))
    chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]
    results: List[Optional[List[R]]] = [None] * len(chunks)
    exceptions: List[Exception] = []

    def _run(index: int, chunk: Sequence[T]) -> None:
        try:
            results[index] = work(chunk)
        except Exception as e:
            exceptions.append(e)

    threads = []
    for index, chunk in enumerate(chunks):
        thread = threading.Thread(target=_run, args=(index, chunk))
        threads.append(thread)
        thread.start()

    for thread in threads:
        thread.join()

    if exceptions:
        logger.error(f"{len(exceptions)} of {len(chunks)} chunks failed: {exceptions[0]}")
        raise exceptions[0]

    logger.debug(f"Processed {len(items)} items in {len(chunks)} chunks")
    return [r for chunk_result in results for r in chunk_result]
