"""
Input documents
===============

Links are described by ``.twv`` JSON documents: a presentation, the
abelianisation, and holonomy matrices as decimal strings.  Built-in
examples can be written out and read back unchanged.
"""

import tempfile
from pathlib import Path

from twv.io import emit_document, example_document, load_document
from twv.reps import lift_rep, verify_rep
from twv.laurent import working_precision

doc = example_document("figure8", digits=60)
text = emit_document(doc)
print(text[:400], "...")

path = Path(tempfile.mkdtemp()) / "figure8.twv"
path.write_text(text)
again = emit_document(load_document(path))
print("round trip identical:", again == text)

# the relators hold for the lifted matrices to the accuracy of the digits
data = load_document(path).to_link()
with working_precision(256):
    for n in (2, 3, 4):
        rep = verify_rep(data.presentation, lift_rep(n, data.representations[0], data.signs[0], data.presentation),
                         tol=1e-40)
        print(f"n={n}: max relator residual {rep.max_residual:.2e}")
