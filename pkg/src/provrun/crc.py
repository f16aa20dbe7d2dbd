"""CRC-32C (Castagnoli polynomial) in pure Python.

Slice-by-8 table lookup; reflected polynomial 0x82F63B78, init and final
xor 0xFFFFFFFF. crc32c(b"123456789") == 0xE3069283.
"""

_POLY = 0x82F63B78


def _build_tables() -> list[list[int]]:
    tables = [[0] * 256 for _ in range(8)]
    t0 = tables[0]
    for i in range(256):
        c = i
        for _ in range(8):
            c = (c >> 1) ^ _POLY if c & 1 else c >> 1
        t0[i] = c
    for i in range(256):
        c = t0[i]
        for k in range(1, 8):
            c = t0[c & 0xFF] ^ (c >> 8)
            tables[k][i] = c
    return tables


_T0, _T1, _T2, _T3, _T4, _T5, _T6, _T7 = _build_tables()


def crc32c(data: bytes, crc: int = 0) -> int:
    crc ^= 0xFFFFFFFF
    view = memoryview(data)
    n = len(view)
    i = 0
    end8 = n - (n % 8)
    while i < end8:
        b0, b1, b2, b3, b4, b5, b6, b7 = view[i:i + 8]
        crc ^= b0 | (b1 << 8) | (b2 << 16) | (b3 << 24)
        crc = (_T7[crc & 0xFF] ^ _T6[(crc >> 8) & 0xFF]
               ^ _T5[(crc >> 16) & 0xFF] ^ _T4[(crc >> 24) & 0xFF]
               ^ _T3[b4] ^ _T2[b5] ^ _T1[b6] ^ _T0[b7])
        i += 8
    while i < n:
        crc = _T0[(crc ^ view[i]) & 0xFF] ^ (crc >> 8)
        i += 1
    return crc ^ 0xFFFFFFFF
