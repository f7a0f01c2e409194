#!/usr/bin/env python3
"""Regenerate src/unicode_tables.inc from the Python unicodedata database.

Emits three tables:
  - simple lowercase mappings (single codepoint -> single codepoint)
  - codepoint ranges with general category P* or S*
  - canonical composition pairs (base, combining) -> composed, exclusions applied

Run from the repository root:  python3 tools/gen_unicode_tables.py
"""

import sys
import unicodedata

MAX_CP = 0x110000


def lowercase_pairs():
    pairs = []
    for cp in range(MAX_CP):
        ch = chr(cp)
        lo = ch.lower()
        if len(lo) == 1 and lo != ch:
            pairs.append((cp, ord(lo)))
    return pairs


def punct_symbol_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP + 1):
        is_ps = cp < MAX_CP and unicodedata.category(chr(cp))[0] in ("P", "S")
        if is_ps and start is None:
            start = cp
        elif not is_ps and start is not None:
            ranges.append((start, cp - 1))
            start = None
    return ranges


def composition_pairs():
    pairs = []
    for cp in range(MAX_CP):
        ch = chr(cp)
        decomp = unicodedata.decomposition(ch)
        if not decomp or decomp.startswith("<"):
            continue
        parts = decomp.split()
        if len(parts) != 2:
            continue
        base, mark = int(parts[0], 16), int(parts[1], 16)
        # skip pairs excluded from composition
        if unicodedata.normalize("NFC", chr(base) + chr(mark)) != ch:
            continue
        pairs.append((base, mark, cp))
    return pairs


def main():
    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py -- do not edit by hand.\n\n")

    lows = lowercase_pairs()
    out.write("static const LowerPair kLowerPairs[] = {\n")
    for cp, lo in lows:
        out.write("    {0x%X, 0x%X},\n" % (cp, lo))
    out.write("};\n\n")

    ranges = punct_symbol_ranges()
    out.write("static const CpRange kPunctSymbolRanges[] = {\n")
    for a, b in ranges:
        out.write("    {0x%X, 0x%X},\n" % (a, b))
    out.write("};\n\n")

    comps = composition_pairs()
    out.write("static const CompPair kCompositionPairs[] = {\n")
    for base, mark, cp in sorted(comps):
        out.write("    {0x%X, 0x%X, 0x%X},\n" % (base, mark, cp))
    out.write("};\n")


if __name__ == "__main__":
    main()
