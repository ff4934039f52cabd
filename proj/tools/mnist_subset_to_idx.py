#!/usr/bin/env python3
"""Convert the 5000-image MNIST subset bundled with mlxtend into gzip'd IDX files.

The subset (500 images per digit, drawn from the MNIST training set) is stored
in the mlxtend wheel as ``mlxtend/data/data/mnist_5k.csv.gz``: one row per
image, 784 pixel columns followed by the label.

Usage:
    pip download mlxtend --no-deps -d /tmp/mlx
    python3 tools/mnist_subset_to_idx.py /tmp/mlx/mlxtend-*.whl data/mnist5k
"""

import argparse
import gzip
import pathlib
import struct
import zipfile

CSV_MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("wheel", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()

    with zipfile.ZipFile(args.wheel) as wheel:
        text = gzip.decompress(wheel.read(CSV_MEMBER)).decode()

    pixels = bytearray()
    labels = bytearray()
    for line in text.splitlines():
        fields = [int(float(v)) for v in line.split(",")]
        if len(fields) != 785:
            raise SystemExit(f"unexpected row width {len(fields)}")
        pixels.extend(fields[:784])
        labels.append(fields[784])

    count = len(labels)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    # mtime=0 keeps the archives byte-stable across conversions.
    with gzip.GzipFile(args.out_dir / "train-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, count, 28, 28))
        f.write(bytes(pixels))
    with gzip.GzipFile(args.out_dir / "train-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, count))
        f.write(bytes(labels))
    print(f"wrote {count} images to {args.out_dir}")


if __name__ == "__main__":
    main()
