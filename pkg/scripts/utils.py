from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent
PKG_DIR = BASE_DIR / "src" / "idealistic"
CORPUS_DIR = PKG_DIR / "corpus"
