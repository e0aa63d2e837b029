"""Regenerate the committed test images in tests/data/."""

from pathlib import Path

from knnup import save_image
from knnup.fixtures import FIXTURES

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, make in FIXTURES.items():
        path = OUT / f"{name}.png"
        save_image(make(), path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
