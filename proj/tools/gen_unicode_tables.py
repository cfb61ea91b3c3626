#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from the unicodedata module.

The tokenizer treats Unicode letters and numbers (general categories L* and
N*) as word characters; the case-fold table covers code points whose
str.lower() form is a single code point of a different value.
"""
import sys
import unicodedata

MAX_CP = 0x110000


def alnum_ranges():
    ranges = []
    start = None
    for cp in range(MAX_CP):
        cat = unicodedata.category(chr(cp))
        is_alnum = cat[0] in ("L", "N")
        if is_alnum and start is None:
            start = cp
        elif not is_alnum and start is not None:
            ranges.append((start, cp - 1))
            start = None
    if start is not None:
        ranges.append((start, MAX_CP - 1))
    return ranges


def lower_pairs():
    pairs = []
    for cp in range(MAX_CP):
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def main(out_path):
    ranges = alnum_ranges()
    pairs = lower_pairs()
    with open(out_path, "w") as f:
        f.write("// Generated by tools/gen_unicode_tables.py; do not edit by hand.\n")
        f.write("// clang-format off\n")
        f.write(f"static constexpr uint32_t kAlnumRanges[][2] = {{\n")
        for i in range(0, len(ranges), 6):
            row = ", ".join(f"{{0x{a:X}, 0x{b:X}}}" for a, b in ranges[i : i + 6])
            f.write(f"    {row},\n")
        f.write("};\n\n")
        f.write("static constexpr uint32_t kLowerPairs[][2] = {\n")
        for i in range(0, len(pairs), 6):
            row = ", ".join(f"{{0x{a:X}, 0x{b:X}}}" for a, b in pairs[i : i + 6])
            f.write(f"    {row},\n")
        f.write("};\n")
        f.write("// clang-format on\n")
    print(f"{out_path}: {len(ranges)} alnum ranges, {len(pairs)} lower pairs")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/unicode_tables.inc")
