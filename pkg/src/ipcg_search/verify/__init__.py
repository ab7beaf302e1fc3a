"""Independent certificate verification."""

from ipcg_search.verify.verifier import Clause, Verdict, verify_certificate, verify_file

__all__ = ["Clause", "Verdict", "verify_certificate", "verify_file"]
