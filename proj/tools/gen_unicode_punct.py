#!/usr/bin/env python3
"""Regenerates src/unicode_punct.inc: codepoint ranges whose Unicode general
category is P* (Pc, Pd, Pe, Pf, Pi, Po, Ps)."""
import sys
import unicodedata

ranges = []
start = None
prev = None
for cp in range(0x110000):
    if unicodedata.category(chr(cp)).startswith("P"):
        if start is None:
            start = cp
        prev = cp
    else:
        if start is not None:
            ranges.append((start, prev))
            start = None
if start is not None:
    ranges.append((start, prev))

out = sys.stdout
out.write("// Generated by tools/gen_unicode_punct.py (Unicode %s). Do not edit.\n"
          % unicodedata.unidata_version)
out.write("// Inclusive codepoint ranges with general category P*.\n")
out.write("static constexpr uint32_t kPunctRanges[][2] = {\n")
for lo, hi in ranges:
    out.write("    {0x%04X, 0x%04X},\n" % (lo, hi))
out.write("};\n")
