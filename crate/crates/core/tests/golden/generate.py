"""Writes the wire golden files from the message layout, independent of the Rust encoder."""
import struct

QNAME = "svc.example.com"


def name(text):
    out = b""
    for label in text.split("."):
        out += bytes([len(label)]) + label.encode()
    return out + b"\x00"


def message(records, tc=False):
    flags = 0x8400 | (0x0200 if tc else 0)
    header = struct.pack(">HHHHHH", 0, flags, 1, len(records), 0, 0)
    question = name(QNAME) + struct.pack(">HH", 1, 1)
    answers = b""
    for octet in records:
        rdata = bytes([192, 0, 2, octet])
        answers += name(QNAME) + struct.pack(">HHIH", 1, 1, 300, len(rdata)) + rdata
    return header + question + answers


def dump(data):
    lines = [" ".join(f"{b:02x}" for b in data[i:i + 16]) for i in range(0, len(data), 16)]
    return "\n".join(lines) + "\n"


GOLDENS = {
    "empty.hex": message([]),
    "fifteen.hex": message(range(1, 16)),
    "sixteen_truncated.hex": message([], tc=True),
}

for file, data in GOLDENS.items():
    with open(file, "w") as f:
        f.write(dump(data))
    print(file, len(data))
