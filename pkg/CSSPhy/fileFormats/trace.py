"""Per-symbol decoder trace as CSV"""

import csv
import typing

from ..receiver import ReceivedFrame

__all__ = ("TRACE_COLUMNS", "writeTrace")

TRACE_COLUMNS = ("symbol_index", "sample_index", "symbol", "peak_magnitude", "s_pre_hat", "frame_start", "delta_phi_hat")


def writeTrace(received: ReceivedFrame, stream: typing.TextIO) -> None:
	"""One row per demodulated symbol after the delimiter. Synchronization results repeat on every row; `delta_phi_hat` is empty without CFO compensation."""
	w = csv.writer(stream, lineterminator="\n")
	w.writerow(TRACE_COLUMNS)
	dPhi = repr(received.cfo.deltaPhiHat) if received.cfo is not None else ""
	for row in received.trace:
		w.writerow((row.symbolIndex, row.sampleIndex, row.symbol, repr(row.peakMagnitude), received.sync.sPreHat, received.sync.frameStart, dPhi))
