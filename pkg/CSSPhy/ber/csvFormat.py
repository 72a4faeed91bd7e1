"""BER curves as CSV"""

import csv
import typing

__all__ = ("CSV_COLUMNS", "writeBerCsv", "readBerCsv")

CSV_COLUMNS = ("snr_db", "frames", "bits", "bit_errors", "symbol_errors", "frame_errors", "ber", "mode", "cfo_hz", "sfo_hz", "sf", "cr", "os", "seed")


def writeBerCsv(records: typing.Iterable["BerRecord"], stream: typing.TextIO) -> None:
	"""Wall time is left out, so identical runs give byte-identical files"""
	w = csv.writer(stream, lineterminator="\n")
	w.writerow(CSV_COLUMNS)
	for r in records:
		w.writerow(r.csvRow())


def readBerCsv(stream: typing.TextIO) -> typing.List[typing.Dict[str, str]]:
	r = csv.DictReader(stream)
	if tuple(r.fieldnames or ()) != CSV_COLUMNS:
		raise ValueError("Not a BER curve file", r.fieldnames)
	return list(r)
