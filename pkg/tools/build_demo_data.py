#!/usr/bin/env python3
"""Regenerate the bundled demo data under src/namegender/demo/.

Everything is derived from the tables below, so the output is deterministic:

    python tools/build_demo_data.py

Face strings list one token per thumbnail: ``F92`` a female face at
confidence 92, ``M80`` a male face, ``-`` no face, ``!`` an image the face API
rejects, and ``M91+f60`` a large male face plus a smaller female face.
``None`` means the image search has no results at all.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from namegender.namedb import COUNTRY_COLUMNS  # noqa: E402
from namegender.normalize import extract_first_name, image_query  # noqa: E402
from namegender.web.transport import query_hash  # noqa: E402

OUT = ROOT / "src" / "namegender" / "demo"

# full name, country, gender, genderize answer (gender, probability, count) or None, faces
PEOPLE = [
    ("Mary Johnson", "US", "F", ("female", 0.99, 41530), "F95 F90 F88 F92 F85"),
    ("John Smith", "US", "M", ("male", 0.99, 52310), "M90 M93 F60 M88 M91"),
    ("Leslie Moore", "US", "F", ("female", 0.72, 3120), "F80 M70 F85 F75 -"),
    ("Taylor Brooks", "US", "M", ("female", 0.55, 2840), "M90 M85 M88 F60 M92"),
    ("Jennifer Lee", "US", "F", ("female", 0.99, 38410), "F90 F88 F93 F91 F87"),
    ("Robert Brown", "US", "M", ("male", 0.99, 47220), "M92 M90 M95 M89 M91"),
    ("Kim Davis", "US", "F", ("female", 0.88, 9870), "F85 M80 F90 F88 F82"),
    ("Patricia Clark", "US", "F", ("female", 0.99, 21030), "F90 F92 F91 F89 F93"),
    ("James Wilson", "US", "M", ("male", 0.99, 50120), "M90 M91+f60 M88 M92 M90"),
    ("Linda Martinez", "US", "F", ("female", 0.99, 19880), "F91 F90 F88 ! F92"),
    ("Michael Anderson", "US", "M", ("male", 0.99, 61230), "M93 M90 M91 M89 M92"),
    ("Susan Taylor", "US", "F", ("female", 0.99, 17650), "F90 F89 F92 F91 F88"),
    ("Wei Zhang", "CN", "M", None, "M85 M80 F70 M88 M82"),
    ("Li Na", "CN", "F", ("male", 0.53, 412), "F92 F90 F88 M60 F91"),
    ("Xiaoming Wang", "CN", "M", None, "M88 M90 M85 M87 -"),
    ("Mei Chen", "CN", "F", ("female", 0.90, 1290), "F90 F88 F91 F89 F92"),
    ("Jing Liu", "CN", "F", None, "F85 F80 M70 F88 F90"),
    ("Hao Zhou", "CN", "M", None, "M90 F75 M85 M88 M80"),
    ("Yan Huang", "CN", "F", None, "F80 M85 F82 M78 F85"),
    ("Jun Wu", "CN", "M", ("male", 0.70, 2210), "M88 M85 M90 M86 M89"),
    ("Andrea Schmidt", "DE", "F", ("female", 0.95, 8830), "F90 F88 M70 F91 F85"),
    ("Jürgen Müller", "DE", "M", ("male", 0.99, 6120), "M95 M92 M90 M93 M91"),
    ("Anna Becker", "DE", "F", ("female", 0.99, 30110), "F92 F90 F88 F91 F89"),
    ("Klaus Weber", "DE", "M", ("male", 0.99, 5410), "M93 M90 M92 M91 M88"),
    ("Sabine Krause", "DE", "F", ("female", 0.99, 7720), "F90 F91 F89 F92 F88"),
    ("Uwe Hoffmann", "DE", "M", ("male", 0.98, 2980), "M90 M88 M92 M91 M89"),
    ("Katrin Schulz", "DE", "F", ("female", 0.99, 4410), "F88 F90 F92 F89 F91"),
    ("Andrea Rossi", "IT", "M", ("male", 0.97, 6650), "M85 F80 M88 M82 F75"),
    ("Giulia Romano", "IT", "F", ("female", 0.99, 9120), "F91 F90 F92 F88 F89"),
    ("Marco Ricci", "IT", "M", ("male", 0.99, 12840), "M92 M90 M91 M93 M89"),
    ("Francesca Greco", "IT", "F", ("female", 0.99, 8870), "F90 F91 F89 F92 F93"),
    ("Luca Conti", "IT", "M", ("male", 0.99, 10230), "F70 F65 M80 F72 F60"),
    ("Simone Gallo", "IT", "M", ("male", 0.90, 3310), "M85 M88 F80 M84 M86"),
    ("João Silva", "BR", "M", ("male", 0.99, 14220), "M90 M88 M91 M89 M92"),
    ("Thaís Souza", "BR", "F", None, "F88 F90 F85 F91 F87"),
    ("Gleisi Costa", "BR", "F", None, "F85 F82 M70 F88 F84"),
    ("Rafael Oliveira", "BR", "M", ("male", 0.99, 16540), "M91 M90 M92 M88 M89"),
    ("Ji-hoon Kim", "KR", "M", None, "M88 M85 M90 F70 M87"),
    ("Min-jung Park", "KR", "F", None, "F90 F88 F87 F91 F89"),
    ("Seo-yeon Choi", "KR", "F", None, "F90 F88 - F87 F89"),
    ("Sung-min Lee", "KR", "M", None, "M86 M84 M88 M85 -"),
    ("Ada Lovelace", "GB", "F", ("female", 0.96, 2630), "F92 F90 F88 F91 F93"),
    ("Oliver Hughes", "GB", "M", ("male", 0.99, 18870), None),
    ("Emily Clarke", "GB", "F", ("female", 0.99, 24110), "- - - - -"),
    ("Priya Sharma", "IN", "F", ("female", 0.97, 6240), "F90 F92 F89 F91 F88"),
    ("Arjun Patel", "IN", "M", ("male", 0.98, 3180), "M91 M89 M90 M92 M88"),
]

# SSA yearly files: name -> (male, female) per year
SSA = {
    1970: {
        "Mary": (12, 19800), "John": (21050, 40), "Leslie": (1210, 3350), "Taylor": (90, 40),
        "Jennifer": (50, 21100), "Robert": (18300, 35), "Kim": (120, 2300), "Patricia": (30, 9900),
        "James": (20100, 60), "Linda": (10, 8200), "Michael": (25300, 90), "Susan": (8, 9800),
        "Andrea": (70, 5200), "Anna": (0, 2100), "Marco": (150, 0), "Ada": (0, 120),
        "Oliver": (310, 0), "Emily": (0, 1900), "Rafael": (420, 0), "Simone": (0, 160),
    },
    2000: {
        "Mary": (8, 6100), "John": (10200, 30), "Leslie": (105, 1480), "Taylor": (3400, 10100),
        "Jennifer": (14, 8100), "Robert": (9100, 20), "Kim": (11, 240), "Patricia": (0, 1400),
        "James": (13800, 45), "Linda": (0, 900), "Michael": (18500, 60), "Susan": (0, 700),
        "Andrea": (35, 3900), "Anna": (0, 4300), "Marco": (410, 0), "Ada": (0, 95),
        "Oliver": (1800, 0), "Emily": (25, 24900), "Rafael": (1300, 0), "Simone": (12, 240),
        "Giulia": (0, 40), "Francesca": (0, 230), "Luca": (180, 10), "Sabine": (0, 5),
        "Priya": (0, 310), "Arjun": (280, 0), "Jun": (45, 6), "Mei": (0, 30),
    },
}

CENSUS = [
    ("mary", 210, 190300), ("john", 201200, 380), ("leslie", 11100, 26800),
    ("taylor", 1900, 850), ("jennifer", 420, 150100), ("robert", 178800, 320),
    ("kim", 840, 9800), ("patricia", 240, 92100), ("james", 190300, 560),
    ("linda", 60, 81200), ("michael", 205100, 810), ("susan", 70, 90200),
    ("andrea", 510, 18400), ("anna", 150, 48100), ("marco", 920, 0),
    ("ada", 20, 6100), ("oliver", 9100, 10), ("emily", 90, 30100),
    ("rafael", 2300, 0), ("francesca", 0, 410),
]

# gender code, name as written in the file, {ISO code: rank 1..13}
DICT = [
    ("M", "John", {"GB": 13, "US": 13, "IE": 12}),
    ("F", "Mary", {"GB": 12, "US": 12, "IE": 13}),
    ("?F", "Leslie", {"US": 8, "GB": 6}),
    ("?M", "Taylor", {"US": 6}),
    ("F", "Jennifer", {"US": 12, "GB": 9}),
    ("M", "Robert", {"US": 12, "GB": 11, "DE": 9}),
    ("?", "Kim", {"US": 8}),
    ("F", "Patricia", {"US": 11, "ES": 9}),
    ("M", "James", {"GB": 12, "US": 12}),
    ("F", "Linda", {"US": 10, "SE": 8, "DE": 7}),
    ("M", "Michael", {"US": 12, "DE": 11, "GB": 11}),
    ("F", "Susan", {"US": 10, "GB": 9}),
    ("F", "Andrea", {"DE": 13, "CH": 10}),
    ("M", "Andrea", {"IT": 7}),
    ("M", "Jürgen", {"DE": 11, "AT": 8}),
    ("F", "Anna", {"DE": 12, "IT": 10, "SE": 11}),
    ("M", "Klaus", {"DE": 11, "AT": 9}),
    ("F", "Sabine", {"DE": 11, "FR": 7}),
    ("M", "Uwe", {"DE": 9}),
    ("F", "Katrin", {"DE": 9}),
    ("F", "Giulia", {"IT": 11}),
    ("M", "Marco", {"IT": 12, "DE": 6}),
    ("F", "Francesca", {"IT": 11}),
    ("M", "Luca", {"IT": 12}),
    ("F", "Luca", {"DE": 3}),
    ("M", "Simone", {"IT": 10}),
    ("F", "Simone", {"DE": 8, "FR": 9}),
    ("M", "João", {"PT": 12}),
    ("M", "Rafael", {"ES": 10, "PT": 9}),
    ("F", "Ada", {"GB": 5}),
    ("M", "Oliver", {"GB": 11, "DE": 9}),
    ("F", "Emily", {"GB": 12, "US": 11}),
    ("F", "Priya", {"IN": 10}),
    ("M", "Arjun", {"IN": 9}),
    ("M", "Wei", {"CN": 11}),
    ("F", "Wei", {"CN": 7}),
    ("?F", "Li", {"CN": 9}),
    ("M", "Xiaoming", {"CN": 6}),
    ("F", "Mei", {"CN": 10}),
    ("F", "Jing", {"CN": 8}),
    ("M", "Jing", {"CN": 8}),
    ("M", "Hao", {"CN": 9}),
    ("F", "Yan", {"CN": 8}),
    ("M", "Yan", {"CN": 6}),
    ("M", "Jun", {"CN": 9, "JP": 10}),
    ("M", "Ji+Hoon", {"KR": 9}),
    ("F", "Min+Jung", {"KR": 8}),
    ("1F", "Seo+Yeon", {"KR": 7}),
    ("1M", "Sung+Min", {"KR": 6}),
]
DICT_ALIASES = [("Juergen", "Jürgen")]

COLUMN_INDEX = {c.code: i for i, c in enumerate(COUNTRY_COLUMNS)}


def dict_line(code: str, name: str, freq: dict[str, int]) -> str:
    block = [" "] * len(COUNTRY_COLUMNS)
    for country, rank in freq.items():
        block[COLUMN_INDEX[country]] = "0123456789ABCD"[rank]
    return f"{code:<2} {name:<26} " + "".join(block)


def thumbnail_bytes(query: str, rank: int) -> bytes:
    return f"namegender demo thumbnail\n{query}#{rank}\n".encode("utf-8")


def face_json(token: str) -> dict:
    if token == "!":
        return {"status": 400, "body": {"error_message": "IMAGE_ERROR_UNSUPPORTED_FORMAT: image_file"}}
    faces = []
    if token != "-":
        parts = token.split("+")
        # response lists the smaller faces first so selection has to look at area
        for i, part in reversed(list(enumerate(parts))):
            size = (120, 150) if i == 0 else (40, 50)
            faces.append({
                "face_rectangle": {"left": 30 + 60 * i, "top": 20, "width": size[0], "height": size[1]},
                "attributes": {"gender": {
                    "value": "Male" if part[0].upper() == "M" else "Female",
                    "confidence": float(part[1:]),
                }},
            })
    return {"status": 200, "body": {"faces": faces, "image_id": "demo"}}


def write_json(path: Path, data) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, ensure_ascii=False, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def main() -> None:
    if OUT.exists():
        shutil.rmtree(OUT)
    OUT.mkdir(parents=True)

    with open(OUT / "dataset.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("full_name,country,gender\n")
        for name, country, gender, _, _ in PEOPLE:
            fh.write(f"{name},{country},{gender}\n")

    (OUT / "ssa").mkdir()
    for year, rows in SSA.items():
        lines = []
        for name, (m, f) in rows.items():
            if f:
                lines.append(f"{name},F,{f}")
            if m:
                lines.append(f"{name},M,{m}")
        (OUT / "ssa" / f"yob{year}.txt").write_text("\n".join(lines) + "\n", encoding="ascii")

    with open(OUT / "census.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("name,male_count,female_count\n")
        for name, m, f in CENSUS:
            fh.write(f"{name},{m},{f}\n")

    with open(OUT / "nam_dict.txt", "w", encoding="utf-8") as fh:
        fh.write("# demo name dictionary; columns documented in namegender.namedb\n")
        for code, name, freq in DICT:
            fh.write(dict_line(code, name, freq) + "\n")
        for alias, target in DICT_ALIASES:
            fh.write(f"=  {alias} {target}\n")

    fixtures = OUT / "fixtures"
    for full_name, country, _, answer, faces in PEOPLE:
        first = extract_first_name(full_name).primary
        if answer is None:
            body = {"name": first, "gender": None, "probability": 0.0, "count": 0}
        else:
            gender, prob, count = answer
            body = {"name": first, "gender": gender, "probability": prob, "count": count}
        write_json(fixtures / "genderize" / f"{first}.json", {"status": 200, "body": body})
        write_json(fixtures / "genderize" / f"{first}.{country}.json",
                   {"status": 200, "body": dict(body, country_id=country)})

        query = image_query(full_name)
        folder = fixtures / query_hash(query)
        folder.mkdir(parents=True)
        (folder / "query.txt").write_text(query + "\n", encoding="utf-8")
        if faces is None:
            continue
        for rank, token in enumerate(faces.split(), start=1):
            image = thumbnail_bytes(query, rank)
            (folder / f"{rank}.jpg").write_bytes(image)
            digest = hashlib.sha256(image).hexdigest()
            write_json(fixtures / "faces" / f"{digest}.json", face_json(token))

    print(f"wrote demo data for {len(PEOPLE)} people to {OUT}")


if __name__ == "__main__":
    main()
