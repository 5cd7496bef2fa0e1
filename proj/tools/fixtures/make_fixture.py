#!/usr/bin/env python3
# Copyright 2026 The adtheme Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic 50-ad fixture: data/fixture/ads.ndjson and pages.csv.

Output is a pure function of this file. Re-run after editing the texts:

    python3 tools/fixtures/make_fixture.py
"""

import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = ROOT / "data" / "fixture"

PAGES = [
    # page_id, page_name, party (None: absent from the registry)
    ("1001", "D66", "D66"),
    ("1002", "Sigrid Kaag", "D66"),
    ("2001", "VVD", "VVD"),
    ("2002", "Mark Rutte", "VVD"),
    ("3001", "Forum voor Democratie", "FvD"),
    ("4001", "GroenLinks", "GL"),
    ("5001", "CDA", "CDA"),
    ("6001", "PvdA", "PvdA"),
    ("7001", "SP", "SP"),
    ("8001", "JA21", "JA21"),
    ("9001", "Stichting Stemwijzer Lokaal", None),
]

TITLES = {
    "1001": "Doe mee met D66",
    "1002": "Doe mee met D66",
    "2001": "Lees het VVD programma",
    "2002": "Lees het VVD programma",
    "3001": "Word lid van Forum",
    "4001": "Stem GroenLinks",
    "5001": "Het CDA programma",
    "6001": "Stem PvdA",
    "7001": "Stem SP",
    "8001": "Stem JA21",
    "9001": "Stemwijzer Lokaal",
}

CAPTIONS = {
    "1001": "d66.nl", "1002": "d66.nl", "2001": "vvd.nl", "2002": "vvd.nl", "3001": "fvd.nl",
    "4001": "groenlinks.nl", "5001": "cda.nl", "6001": "pvda.nl", "7001": "sp.nl", "8001": "ja21.nl",
    "9001": "stemwijzerlokaal.nl",
}

# (page_id, body). Every body is a distinct text unless listed in REPEATS.
TEXTS = [
    ("1001", "Onderwijs is de sleutel. Wij investeren in elke leraar en elke leerling, want goed onderwijs geeft iedereen een kans."),
    ("1001", "Het klimaat wacht niet. Meer zonnepanelen, minder uitstoot en schone energie voor iedereen."),
    ("1002", "Het is tijd voor nieuw leiderschap. Stem 🗳️ op 17 maart D66."),
    ("1001", "Studenten verdienen een eerlijke studiefinanciering. Terug naar de basisbeurs!"),
    ("1002", "Kunst en cultuur maken ons land mooier. Steun musea, muziek en de bibliotheek in je buurt."),
    ("1001", "Een betaalbare woning voor starters. Wij bouwen een miljoen nieuwe huizen."),
    ("1001", "Zorg dichtbij: meer handen aan het bed en een goed salaris voor iedere verpleegkundige."),
    ("1002", "𝗞𝗹𝗶𝗺𝗮𝗮𝘁 en 𝗻𝗮𝘁𝘂𝘂𝗿 verdienen bescherming 🌍. Minder stikstof, meer biodiversiteit."),
    ("2001", "Veiligheid voorop. Meer politie op straat en harde straffen voor criminelen."),
    ("2001", "Ondernemers zijn de motor van onze economie. Lagere belasting voor het mkb."),
    ("2001", "Werk moet lonen. Meer banen en een hoger minimumloon."),
    ("2002", "Samen krijgen we corona onder controle. Laat je vaccineren en bescherm de zorg."),
    ("2002", "Nederland moet sterk blijven in Europa. Doe mee op 17 maart."),
    ("2001", "Meer woningen, sneller bouwen. De woningmarkt moet weer werken voor huurder en koper."),
    ("2001", "Een sterke krijgsmacht en een veilig Nederland. Wij investeren in defensie en onze veteranen."),
    ("2002", "Bekijk ons programma: onderwijs, zorg, veiligheid, economie, klimaat en woningen. Lees alles over onze plannen."),
    ("3001", "Stop de lockdown! Open de samenleving. Geen vaccinatie onder druk, vrijheid voor iedereen."),
    ("3001", "Grenzen dicht. Stop de massa-immigratie en het falende asielbeleid."),
    ("3001", "Nexit: weg uit de EU en Brussel. Wij willen een referendum en echte democratie."),
    ("3001", "Boeren zijn de ruggengraat van ons land. Stop de stikstofwet en red het platteland."),
    ("3001", "Ons programma: lagere belasting, minder inflatie, meer koopkracht, een gezonde begroting, geen "
             "staatsschuld en een sterke middenstand. Daarnaast: betere zorg, een eerlijke zorgverzekering, een "
             "huisarts dichtbij, aandacht voor gezondheid, geen lockdown, respect voor iedere zorgmedewerker en "
             "iedere patiënt."),
    ("3001", "Nederland moet veilig blijven: een sterk leger, betere wapens, meer soldaten, een groter "
             "defensiebudget, trots op de marine en de navo en aandacht voor iedere veteraan. Europa verdient "
             "eerlijke handel, meer export, slimme diplomatie en geen nieuw verdrag."),
    ("4001", "Klimaatrechtvaardigheid nu. De vervuiler betaalt en we kiezen voor duurzame energie uit windmolens."),
    ("4001", "Gelijke kansen voor iedereen: stop racisme en discriminatie."),
    ("4001", "De trein moet goedkoper en het ov beter bereikbaar. Meer fietspaden in elke wijk."),
    ("4001", "Geen armoede in een rijk land. Verhoog het minimumloon en de bijstand."),
    ("4001", "Doe mee met onze campagne! Word lid en ontvang onze nieuwsbrief."),
    ("5001", "Boeren en tuinders verdienen waardering. Samen met de landbouw werken aan een vitaal platteland en minder stikstof."),
    ("5001", "Een overheid die naast je staat. Nooit meer een toeslagenaffaire; de gemeente dichtbij."),
    ("5001", "Mantelzorgers verdienen steun. Zorg is van ons allemaal."),
    ("5001", "Gezinnen verdienen zekerheid: een fatsoenlijk pensioen, een eerlijke AOW en werk dat loont."),
    ("5001", "Veiligheid in de wijk: meer wijkagenten en de aanpak van ondermijning en drugs."),
    ("6001", "Zorgmedewerkers verdienen meer dan applaus. Een beter loon voor iedere verpleegkundige in het ziekenhuis."),
    ("6001", "Huren moeten omlaag. Een eerlijke huur en meer sociale huurwoningen via de corporatie."),
    ("6001", "Een baan met zekerheid. Sterke vakbonden en eerlijk loon voor iedere werknemer."),
    ("6001", "Café's en winkels in de binnenstad hebben het zwaar. Steun de ondernemer in je buurt."),
    ("7001", "De zorg is geen markt. Schaf het eigen risico af en stop met bezuinigen op ziekenhuizen."),
    ("7001", "Huurverlaging nu! Woningnood los je op met woningbouw door de overheid."),
    ("7001", "Samen sterk tegen armoede en schulden. Sluit je aan bij de SP."),
    ("8001", "Asiel en migratie onder controle. Integratie is een plicht voor iedere nieuwkomer."),
    ("8001", "Keihard tegen criminaliteit en terrorisme. Meer politie en een rechter die doorpakt."),
]

# Extra ads reusing a text: (text index, page_id, body override or None).
# Overrides differ only in case, spacing or diacritics and share the text key.
REPEATS = [
    (1, "1001", None),
    (1, "1002", None),
    (0, "1001", None),
    (9, "2001", None),
    (13, "2001", None),
    (11, "2002", None),
    (16, "3001", "STOP de lockdown!  Open de samenleving.\nGeen vaccinatie onder druk, vrijheid voor iedereen."),
    (35, "6001", "Cafe's en winkels in de binnenstad hebben het zwaar. Steun de ondernemer in je buurt."),
    (23, "9001", None),
]

GENDERS = ["female", "male"]
AGES = ["13-17", "18-24", "25-34", "35-44", "45-54", "55-64", "65+"]
REGIONS = ["Drenthe", "Flevoland", "Friesland", "Gelderland", "Groningen", "Limburg", "Noord-Brabant",
           "Noord-Holland", "Overijssel", "Utrecht", "Zeeland", "Zuid-Holland"]
IMPRESSIONS = [(0, 999), (1000, 4999), (5000, 9999), (10000, 14999), (15000, 19999), (20000, 24999),
               (25000, 29999), (30000, 34999), (35000, 39999), (40000, 44999), (45000, 49999),
               (50000, 59999), (60000, 69999), (70000, 79999), (80000, 89999), (90000, 99999),
               (100000, 124999), (125000, 149999), (150000, 174999), (175000, 199999),
               (200000, 249999), (250000, 299999), (300000, 349999), (350000, 399999),
               (400000, 449999), (450000, 499999), (500000, 599999), (600000, 699999),
               (700000, 799999), (800000, 899999), (900000, 999999), (1000000, None)]
SPEND = [(0, 99), (100, 199), (200, 299), (300, 399), (400, 499), (500, 599), (600, 699), (700, 799),
         (800, 899), (900, 999), (1000, 1499), (1500, 1999), (2000, 2499)]

# Texts (by index into TEXTS) whose ads carry no demographic or region data.
NO_DEMOGRAPHICS = {6, 29}
NO_REGIONS = {6, 13, 40}


def split(rng, n, total=1000):
    """n positive integer parts summing to total."""
    cuts = sorted(rng.sample(range(1, total), n - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


def bounds(r):
    lo, hi = r
    out = {"lower_bound": str(lo)}
    if hi is not None:
        out["upper_bound"] = str(hi)
    return out


def record(rng, index, ad_id, page_id, body, creative_page):
    page_name = next(name for pid, name, _ in PAGES if pid == page_id)
    day = 1 + rng.randrange(28)
    rec = {
        "id": ad_id,
        "page_id": page_id,
        "page_name": page_name,
        "ad_delivery_start_time": f"2021-02-{day:02d}",
        "ad_delivery_stop_time": f"2021-03-{min(day, 16):02d}",
        "currency": "EUR",
        "spend": bounds(rng.choice(SPEND)),
        "impressions": bounds(IMPRESSIONS[rng.randrange(len(IMPRESSIONS) - 1)] if index != 20 else IMPRESSIONS[-1]),
        "estimated_audience_size": bounds((100000, 499999)),
        "ad_creative_bodies": [body],
        "ad_creative_link_titles": [TITLES[creative_page]],
        "ad_creative_link_captions": [CAPTIONS[creative_page]],
    }
    if index % 4 == 0:
        rec["ad_creative_link_descriptions"] = ["Lees meer op " + CAPTIONS[creative_page]]
    if index not in NO_DEMOGRAPHICS:
        # Joint age x gender cells in thousandths, as the archive reports them.
        cells = split(rng, len(AGES) * len(GENDERS))
        rec["demographic_distribution"] = [
            {"percentage": f"{cells[i * len(GENDERS) + j] / 1000:.3f}", "age": age, "gender": gender}
            for i, age in enumerate(AGES) for j, gender in enumerate(GENDERS)
        ]
    if index not in NO_REGIONS:
        cells = split(rng, len(REGIONS))
        rec["delivery_by_region"] = [{"percentage": f"{c / 1000:.3f}", "region": r} for c, r in zip(cells, REGIONS)]
    return rec


def main():
    rng = random.Random(20210317)
    ads = [(page, body) for page, body in TEXTS]
    for text_index, page, override in REPEATS:
        ads.append((page, override if override is not None else TEXTS[text_index][1]))
    # Repeats carry the creative (title, caption, description) of the text
    # they repeat, even when another page runs them.
    lines = []
    for index, (page, body) in enumerate(ads):
        source = index if index < len(TEXTS) else REPEATS[index - len(TEXTS)][0]
        rec = record(rng, source, f"23{index + 1:013d}", page, body, TEXTS[source][0])
        lines.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "ads.ndjson").write_text("\n".join(lines) + "\n", encoding="utf-8")
    registry = ["page_id,party"] + [f"{pid},{party}" for pid, _, party in PAGES if party]
    (OUT / "pages.csv").write_text("\n".join(registry) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
