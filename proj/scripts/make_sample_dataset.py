#!/usr/bin/env python3
"""Writes data/sample_names.csv, the bundled desk-scale sample dataset.

The list is curated by hand in the same (persian, latin, gender) shape as
the full public release. Before writing, the script verifies the data is a
fixed point of the toolkit's normalization rules (so loading it is the
identity), that the latin column matches the documented pattern, and that
the five nearest neighbors of the Persian name "sara" are all female (the
bundled-sample lookups in the docs and tests rely on that).
"""

import csv
import re
import sys
import unicodedata
from pathlib import Path

MALE = [
    ("علی", "ali"), ("محمد", "mohammad"), ("حسین", "hossein"), ("حسین", "hosein"),
    ("رضا", "reza"), ("امیر", "amir"), ("مهدی", "mahdi"), ("حسن", "hasan"),
    ("احمد", "ahmad"), ("سعید", "saeed"), ("مسعود", "masoud"), ("مجید", "majid"),
    ("حمید", "hamid"), ("وحید", "vahid"), ("جواد", "javad"), ("کاظم", "kazem"),
    ("ابراهیم", "ebrahim"), ("اسماعیل", "esmail"), ("یوسف", "yousef"),
    ("داوود", "davood"), ("کریم", "karim"), ("رحیم", "rahim"), ("بهروز", "behrouz"),
    ("بهرام", "bahram"), ("بیژن", "bijan"), ("کوروش", "kourosh"),
    ("داریوش", "dariush"), ("آرش", "arash"), ("آرمان", "arman"), ("آریا", "aria"),
    ("بابک", "babak"), ("سیاوش", "siavash"), ("سهراب", "sohrab"), ("رستم", "rostam"),
    ("فرهاد", "farhad"), ("فریدون", "fereydoun"), ("کیان", "kian"),
    ("کیارش", "kiarash"), ("پارسا", "parsa"), ("پویا", "pouya"), ("پیمان", "peyman"),
    ("پدرام", "pedram"), ("شهرام", "shahram"), ("شاهین", "shahin"),
    ("رامین", "ramin"), ("نیما", "nima"), ("امید", "omid"), ("مهران", "mehran"),
    ("مهرداد", "mehrdad"), ("کامران", "kamran"), ("کاوه", "kaveh"),
    ("منوچهر", "manouchehr"), ("هوشنگ", "houshang"), ("ایرج", "iraj"),
    ("جمشید", "jamshid"), ("خسرو", "khosrow"), ("فرزاد", "farzad"),
    ("فرید", "farid"), ("فرشاد", "farshad"), ("میلاد", "milad"),
    ("پوریا", "pouria"), ("علیرضا", "alireza"), ("محمدرضا", "mohammadreza"),
    ("امیرحسین", "amirhossein"), ("محمد‌علی", "mohammadali"),
    ("امیر‌علی", "amirali"), ("عباس", "abbas"), ("اکبر", "akbar"),
    ("اصغر", "asghar"), ("قاسم", "ghasem"), ("ناصر", "naser"),
    ("منصور", "mansour"), ("محمود", "mahmoud"), ("مصطفی", "mostafa"),
    ("مرتضی", "morteza"), ("مجتبی", "mojtaba"), ("غلامرضا", "gholamreza"),
    ("حبیب", "habib"), ("رسول", "rasoul"), ("صادق", "sadegh"), ("طاهر", "taher"),
    ("فرامرز", "faramarz"), ("فردین", "fardin"), ("کمال", "kamal"),
    ("جلال", "jalal"), ("جمال", "jamal"), ("کمیل", "komeil"), ("میثم", "meysam"),
    ("مازیار", "maziar"), ("ماهان", "mahan"), ("متین", "matin"),
    ("محسن", "mohsen"), ("مهرزاد", "mehrzad"), ("نادر", "nader"),
    ("نوید", "navid"), ("هادی", "hadi"), ("هومن", "houman"), ("هوتن", "hootan"),
    ("یاشار", "yashar"), ("یحیی", "yahya"), ("ادیب", "adib"),
    ("اردشیر", "ardeshir"), ("اردلان", "ardalan"), ("ارسلان", "arsalan"),
    ("اشکان", "ashkan"), ("افشین", "afshin"), ("البرز", "alborz"),
    ("انوش", "anoush"), ("اهورا", "ahoora"), ("ایمان", "iman"),
    ("برزو", "borzou"), ("بردیا", "bardia"), ("بهزاد", "behzad"),
    ("بهمن", "bahman"), ("بهنام", "behnam"), ("تورج", "touraj"),
    ("تیمور", "teymour"), ("جهانگیر", "jahangir"), ("خشایار", "khashayar"),
    ("رامتین", "ramtin"), ("رهام", "roham"), ("سپهر", "sepehr"),
    ("سروش", "soroush"), ("سامی", "sami"), ("شایان", "shayan"),
    ("شروین", "shervin"), ("عرفان", "erfan"), ("فربد", "farbod"),
    ("فرخ", "farrokh"), ("کسری", "kasra"),
]

FEMALE = [
    ("سارا", "sara"), ("مریم", "maryam"), ("فاطمه", "fatemeh"), ("زهرا", "zahra"),
    ("نرگس", "narges"), ("نازنین", "nazanin"), ("شیرین", "shirin"),
    ("لیلا", "leila"), ("مینا", "mina"), ("نسرین", "nasrin"),
    ("نسترن", "nastaran"), ("پریسا", "parisa"), ("پرستو", "parastoo"),
    ("شقایق", "shaghayegh"), ("شبنم", "shabnam"), ("سپیده", "sepideh"),
    ("ستاره", "setareh"), ("سحر", "sahar"), ("سمیرا", "samira"),
    ("سیمین", "simin"), ("شهرزاد", "shahrzad"), ("فرشته", "fereshteh"),
    ("فریبا", "fariba"), ("فرناز", "farnaz"), ("گلناز", "golnaz"),
    ("الهام", "elham"), ("الهه", "elaheh"), ("آزاده", "azadeh"),
    ("آیدا", "aida"), ("بهار", "bahar"), ("بیتا", "bita"), ("دریا", "darya"),
    ("دنیا", "donya"), ("رویا", "roya"), ("ریحانه", "reyhaneh"),
    ("زیبا", "ziba"), ("سوسن", "susan"), ("شادی", "shadi"), ("شیوا", "shiva"),
    ("صبا", "saba"), ("طاهره", "tahereh"), ("عاطفه", "atefeh"),
    ("غزل", "ghazal"), ("کتایون", "katayoun"), ("لادن", "ladan"),
    ("مهسا", "mahsa"), ("مهناز", "mahnaz"), ("مژگان", "mozhgan"),
    ("مهتاب", "mahtab"), ("ندا", "neda"), ("نگار", "negar"), ("نگین", "negin"),
    ("نیلوفر", "niloufar"), ("هانیه", "hanieh"), ("هستی", "hasti"),
    ("یاسمن", "yasaman"), ("آتنا", "atena"), ("ساره", "sareh"),
    ("تارا", "tara"), ("سارینا", "sarina"), ("ساناز", "sanaz"),
    ("مارال", "maral"), ("پری", "pari"), ("گلاره", "gelareh"),
    ("مهشید", "mahshid"), ("مهرناز", "mehrnaz"), ("مهدیه", "mahdieh"),
    ("نازیلا", "nazila"), ("نیکا", "nika"), ("یلدا", "yalda"),
]

# Codepoints the normalizer rewrites or removes; their presence would mean
# the sample is not in canonical form.
NON_CANONICAL = set(
    [0x064A, 0x0649, 0x06D2, 0x0643, 0x06AA, 0x0629, 0x06C1, 0x06BE, 0x0671,
     0x0640, 0x0670]
    + list(range(0x064B, 0x0660))
    + list(range(0x0660, 0x066A))
    + list(range(0x06F0, 0x06FA))
)

LATIN_RE = re.compile(r"^[a-z][a-z '\-]*$")


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[len(b)]


def check(records):
    seen = set()
    for persian, latin, gender in records:
        assert persian and latin, (persian, latin)
        for ch in persian:
            cp = ord(ch)
            assert cp not in NON_CANONICAL, f"non-canonical U+{cp:04X} in {persian!r}"
        assert persian == unicodedata.normalize("NFC", persian), persian
        assert persian == " ".join(persian.split()), repr(persian)
        assert LATIN_RE.match(latin), latin
        key = (persian, latin, gender)
        assert key not in seen, f"duplicate triple {key}"
        seen.add(key)

    # The five nearest neighbors of "sara" must all be female, under the
    # toolkit's ordering (distance, matched key, gender female first).
    query = "سارا"
    ranked = sorted(
        records,
        key=lambda r: (
            levenshtein(query, r[0]) / max(len(query), len(r[0])),
            r[0],
            r[2] != "female",
            r[1],
        ),
    )
    top5 = ranked[:5]
    assert all(r[2] == "female" for r in top5), [
        (r[0], r[1], r[2]) for r in top5
    ]
    print("nearest to سارا:", [(r[0], round(levenshtein(query, r[0]) / max(len(query), len(r[0])), 3)) for r in top5])


def main():
    records = [(p, l, "male") for p, l in MALE] + [(p, l, "female") for p, l in FEMALE]
    assert len(records) == 200, len(records)
    assert len(MALE) == 130 and len(FEMALE) == 70
    check(records)

    out = Path(__file__).resolve().parent.parent / "data" / "sample_names.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["persian", "latin", "gender"])
        writer.writerows(records)
    print(f"wrote {len(records)} records to {out}")


if __name__ == "__main__":
    sys.exit(main())
