#!/usr/bin/env python3
"""Build the bundled toy corpus under fixtures/.

Articles, claims, sources, gold pair labels, a toy word-vector table, the
medical-term list, feed fixtures and monitor config all come from here.
Run from the repository root: python scripts/build_fixtures.py
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

# ---------------------------------------------------------------------------
# toy word vectors: one axis per topic, words may mix topics, small per-word
# jitter keeps vectors distinct while keeping same-topic cosines near 1
# ---------------------------------------------------------------------------

TOPICS: dict[str, list[str]] = {
    "general": [
        "study", "studies", "research", "researchers", "trial", "trials",
        "doctors", "doctor", "scientists", "evidence", "patients", "health",
        "medical", "medicine", "hospital", "hospitals", "clinics", "clinical",
        "experts", "report", "reports", "screening", "nutritionists",
        "officials", "authorities", "specialist", "reviews", "panel",
        "findings", "guidance", "medication", "supplement", "supplements",
        "capsules", "doses", "pediatricians", "nurses", "volunteers",
    ],
    "cancer": ["cancer", "tumor", "tumors", "oncologist", "oncologists", "chemotherapy"],
    "garlic": ["garlic", "cloves", "pungent"],
    "cure": [
        "cure", "cures", "curing", "heals", "remedy", "remedies", "treats",
        "treated", "treatments", "therapy", "herbalists", "healers",
    ],
    "flu": ["flu", "influenza", "seasonal"],
    "vaccine": ["vaccine", "vaccination", "injection", "immunologists"],
    "bleach": ["bleach", "disinfectant", "chlorine"],
    "corona": ["coronavirus", "covid", "lockdown", "infection", "infections", "outbreaks"],
    "virus": ["virus", "viruses", "viral"],
    "vitamin": ["vitamin", "vitamins", "c", "citrus"],
    "cold": ["cold", "colds", "sniffles"],
    "fiveg": ["5g", "towers", "antennas", "wireless", "radiation"],
    "turmeric": ["turmeric", "curcumin", "spice"],
    "inflam": ["inflammation", "arthritis", "joint", "joints", "swelling"],
    "asthma": ["asthma", "inhalers", "wheezy"],
    "homeo": ["homeopathy", "homeopathic", "pellets"],
    "smoke": ["smoking", "smoke", "smokers", "cigarette", "tobacco"],
    "lung": ["lung", "lungs", "respiratory"],
    "mask": ["masks", "mask", "respirator", "respirators", "ventilation"],
    "transmission": ["transmission", "transmit", "spread", "spreads"],
    "omega": ["omega", "3", "fatty", "acids", "fish", "oil"],
    "heart": ["triglycerides", "cholesterol", "cardiology", "heart", "blood"],
    "prevention": [
        "prevents", "prevent", "protection", "reduces", "reduce", "lowers",
        "lowered", "shorten", "cuts",
    ],
    "cause": ["causes", "cause", "caused", "gives", "give", "triggers"],
    "winter": ["winter", "winters", "wool", "socks", "soups", "cozy", "storms"],
    "sleep": ["sleep", "bedtimes", "rest"],
    "cooking": [
        "kitchen", "chef", "recipes", "stew", "bread", "butter", "onions",
        "cinnamon", "roast", "potatoes", "vinegar", "supper", "tea",
        "lentils", "menu", "stoves",
    ],
    "farming": ["farm", "farmer", "hams", "smokehouse", "crops", "barn", "planting"],
    "skin": ["collagen", "serums", "dermatologists", "skincare", "formulas"],
    "brain": ["memory", "recall", "brain", "scans"],
    "fitness": ["walk", "exercise", "brisk"],
    "city": ["city", "housing", "procurement", "suppliers", "shipments", "administrators"],
    "immune": ["immune", "immunity", "defenses"],
}

JITTER = 0.08


def _jitter(word: str, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(word.encode()).digest()[:8], "big")
    rng = np.random.default_rng(seed)
    v = rng.normal(size=dim)
    return JITTER * v / np.linalg.norm(v)


def build_vectors() -> dict[str, np.ndarray]:
    topics = list(TOPICS)
    dim = len(topics)
    word_topics: dict[str, list[int]] = {}
    for t_idx, words in enumerate(TOPICS.values()):
        for w in words:
            word_topics.setdefault(w, []).append(t_idx)
    vectors = {}
    for word, t_idxs in word_topics.items():
        base = np.zeros(dim)
        for t in t_idxs:
            base[t] = 1.0
        base /= np.linalg.norm(base)
        vectors[word] = base + _jitter(word, dim)
    return vectors


def write_vectors(path: Path) -> None:
    vectors = build_vectors()
    dim = len(TOPICS)
    lines = [f"{len(vectors)} {dim}"]
    for word in sorted(vectors):
        comps = " ".join(f"{v:.6f}" for v in vectors[word])
        lines.append(f"{word} {comps}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


MEDICAL_TERMS = [
    "asthma",
    "cancer",
    "coronavirus",
    "covid",
    "flu",
    "homeopathy",
    "inflammation",
    "influenza",
    "transmission",
    "triglycerides",
    "tumor",
    "vaccination",
    "vaccine",
    "virus",
]

# ---------------------------------------------------------------------------
# corpus content
# ---------------------------------------------------------------------------

SOURCES = [
    {"id": "src-hh", "name": "Herbal Health News", "base_url": "https://herbalhealth.example", "reliability": "unreliable", "kind": "news_or_blog"},
    {"id": "src-wd", "name": "Wellness Daily", "base_url": "https://wellnessdaily.example", "reliability": "unreliable", "kind": "news_or_blog"},
    {"id": "src-nf", "name": "NaturoFacts", "base_url": "https://naturofacts.example", "reliability": "unknown", "kind": "news_or_blog"},
    {"id": "src-mt", "name": "MedToday", "base_url": "https://medtoday.example", "reliability": "reliable", "kind": "news_or_blog"},
    {"id": "src-gn", "name": "Global Health Desk", "base_url": "https://globalhealthdesk.example", "reliability": "reliable", "kind": "news_or_blog"},
    {"id": "src-fc1", "name": "FactCheck Alpha", "base_url": "https://factcheckalpha.example", "reliability": "reliable", "kind": "fact_checker"},
    {"id": "src-fc2", "name": "MetaVerify", "base_url": "https://metaverify.example", "reliability": "reliable", "kind": "fact_checker"},
]

CLAIMS = [
    {"id": "c01", "statement": "Garlic cures cancer.", "rating": "false", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/garlic-cancer"},
    {"id": "c02", "statement": "The flu vaccine gives you influenza.", "rating": "false", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/flu-shot"},
    {"id": "c03", "statement": "Drinking bleach cures the coronavirus infection.", "rating": "false", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/bleach"},
    {"id": "c04", "statement": "Vitamin c prevents the common cold.", "rating": "mixture", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/vitamin-c"},
    {"id": "c05", "statement": "5g towers spread the coronavirus.", "rating": "false", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/5g"},
    {"id": "c06", "statement": "Turmeric reduces joint inflammation.", "rating": "mostly true", "fact_checker_id": "src-fc2", "fact_check_url": "https://metaverify.example/turmeric"},
    {"id": "c07", "statement": "Homeopathy treats asthma effectively.", "rating": "unknown", "fact_checker_id": "src-fc2", "fact_check_url": "https://metaverify.example/homeopathy-asthma"},
    {"id": "c08", "statement": "Smoking causes lung cancer.", "rating": "true", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/smoking"},
    {"id": "c09", "statement": "Face masks reduce virus transmission.", "rating": "mostly true", "fact_checker_id": "src-fc2", "fact_check_url": "https://metaverify.example/masks"},
    {"id": "c10", "statement": "Omega 3 fatty acids decrease triglycerides.", "rating": "true", "fact_checker_id": "src-fc2", "fact_check_url": "https://metaverify.example/omega3"},
]

ARTICLES = [
    {
        "id": "a01", "source_id": "src-hh", "split": "sample1",
        "title": "Garlic: The Kitchen Staple Your Oncologist Ignores",
        "body": [
            "Herbalists around the world insist that garlic cures cancer when eaten raw each morning.",
            "Ancient healers prized the pungent cloves long before modern medicine existed.",
            "One reader told us her tumor shrank after a month of garlic tea.",
            "Doctors remain skeptical, but believers keep planting more garlic.",
        ],
    },
    {
        "id": "a02", "source_id": "src-mt", "split": "sample1",
        "title": "Smoking and Lung Cancer: The Evidence Keeps Growing",
        "body": [
            "Decades of research show that smoking causes lung cancer in both heavy and light smokers.",
            "Oncologists say quitting at any age lowers the risk substantially.",
            "Tobacco smoke damages lung tissue with every cigarette.",
            "Health campaigns continue to push screening for longtime smokers.",
        ],
    },
    {
        "id": "a03", "source_id": "src-gn", "split": "sample2",
        "title": "No, Drinking Bleach Will Not Cure the Coronavirus",
        "body": [
            "Viral posts claim that drinking bleach cures the coronavirus infection within days.",
            "Poison control centers warn that swallowing disinfectant causes serious injury.",
            "Health authorities stress that no household chemical treats covid.",
            "Doctors urge readers to rely on approved care instead.",
        ],
    },
    {
        "id": "a04", "source_id": "src-mt", "split": "sample2",
        "title": "Large Trial Finds Face Masks Reduce Virus Transmission Indoors",
        "body": [
            "Researchers report that face masks reduce virus transmission in crowded indoor settings.",
            "The trial followed thousands of volunteers across three cities.",
            "Masks worked best when combined with good ventilation.",
            "Hospitals already require respirators in high risk wards.",
        ],
    },
    {
        "id": "a23", "source_id": "src-gn", "split": "sample1",
        "title": "The Vitamin C Debate Returns Every Winter",
        "body": [
            "Some nutritionists argue that vitamin c prevents the common cold if taken daily.",
            "Large reviews, however, find only a small effect on how long colds last.",
            "Supporters point to decades of supplement sales as proof of faith, not efficacy.",
            "Both camps agree that severe deficiency harms immune defenses.",
        ],
    },
    {
        "id": "a05", "source_id": "src-wd", "split": "sample1",
        "title": "Nine Cozy Habits for a Healthier Winter",
        "body": [
            "Thick soups and early bedtimes top our winter comfort list.",
            "A brisk walk at noon keeps everyone moving on gray days.",
            "Layered wool socks beat any space heater, according to our readers.",
            "One subscriber still swears the flu vaccine gives you influenza every winter, though her doctor disagrees.",
            "Warm lemon water remains a morning favorite in our office.",
            "Finally, a tidy desk calms the mind when storms keep everyone indoors.",
        ],
    },
    {
        "id": "a06", "source_id": "src-nf", "split": "sample1",
        "title": "Grandma's Kitchen Notebook: Seven Fixes for a Dull Supper",
        "body": [
            "Her handwritten pages smell of cinnamon and old paper.",
            "Every stew starts with onions browned slow in butter.",
            "She also insists a spoon of turmeric reduces joint inflammation better than any pill.",
            "Sunday bread gets an extra hour to rise near the oven.",
            "Her secret for roast potatoes is a splash of vinegar in the water.",
            "Nobody leaves her table hungry, least of all the grandchildren.",
        ],
    },
    {
        "id": "a07", "source_id": "src-mt", "split": "sample1",
        "title": "Why the Flu Shot Cannot Make You Sick",
        "body": [
            "Immunologists explain that the influenza vaccination never gives you the flu.",
            "The injection contains no live virus at all.",
            "Soreness for a day is the immune system doing its job.",
            "Seasonal protection matters most for vulnerable patients.",
        ],
    },
    {
        "id": "a22", "source_id": "src-gn", "split": "sample2",
        "title": "Wards Report Fewer Outbreaks as Mask Rules Hold",
        "body": [
            "Hospital data confirm face masks reduce the spread of viruses among staff.",
            "Nurses wear fitted respirators during every shift.",
            "Visitor policies relaxed once infection counts fell.",
            "Administrators credit steady habits rather than any single rule.",
        ],
    },
    {
        "id": "a08", "source_id": "src-wd", "split": "sample1",
        "title": "Why Vitamin C Deserves a Spot in Your Winter Routine",
        "body": [
            "Nutritionists praise vitamin c for keeping immune defenses alert.",
            "Citrus season conveniently peaks just as sniffles move through offices.",
            "Regular vitamin doses may shorten rough colds, devotees say.",
            "Classic studies on sailors started the vitamin craze a century ago.",
        ],
    },
    {
        "id": "a09", "source_id": "src-nf", "split": "sample1",
        "title": "Families Turn to Gentle Remedies for Wheezy Kids",
        "body": [
            "Parents in the forum describe calmer winters after switching to homeopathic pellets.",
            "Several report fewer asthma flare ups since starting the regimen.",
            "Conventional inhalers stay in the drawer, one mother writes.",
            "Skeptical pediatricians caution against dropping prescribed medication.",
        ],
    },
    {
        "id": "a10", "source_id": "src-hh", "split": "sample2",
        "title": "Quiet Towns, Strange Fevers: What Locals Suspect",
        "body": [
            "Residents noticed odd fevers soon after crews installed new antennas last spring.",
            "Several families report headaches near the wireless equipment.",
            "Officials dismiss any link and cite routine inspections.",
            "Still, forum threads keep collecting stories every week.",
        ],
    },
    {
        "id": "a11", "source_id": "src-gn", "split": "sample1",
        "title": "Heart Panel Weighs Fish Oil Results",
        "body": [
            "A cardiology panel reviewed new fish oil findings this month.",
            "Participants taking daily capsules showed lower blood fat readings.",
            "Skeptics note earlier trials found weaker effects.",
            "The panel will publish guidance next quarter.",
        ],
    },
    {
        "id": "a12", "source_id": "src-mt", "split": "sample1",
        "title": "Omega 3 Supplements and Your Memory",
        "body": [
            "New work links omega 3 intake with sharper recall in older adults.",
            "Volunteers took fish oil capsules for six months before testing.",
            "Brain scans showed modest changes in memory regions.",
            "Authors caution that omega levels alone cannot explain the gains.",
        ],
    },
    {
        "id": "a13", "source_id": "src-gn", "split": "sample1",
        "title": "Collagen, Glow, and the Vitamin C Serum Boom",
        "body": [
            "Dermatologists say vitamin c serums support collagen in aging skin.",
            "Shoppers now compare vitamin concentrations like fine wine.",
            "Skincare forums rank every vitamin c formula by strength.",
            "Experts warn visible results take months, not days.",
        ],
    },
    {
        "id": "a15", "source_id": "src-wd", "split": "sample1",
        "title": "Turmeric Everywhere: A Golden Spice Has Its Moment",
        "body": [
            "Cafes now stir turmeric into lattes, soups, and even lemonade.",
            "Fans of the golden spice credit curcumin for its glow.",
            "Chefs love how a pinch of turmeric brightens a pale stew.",
            "Suppliers say turmeric shipments doubled in two years.",
        ],
    },
    {
        "id": "a14", "source_id": "src-mt", "split": "sample1",
        "title": "Flu Season Overwhelms Walk In Clinics",
        "body": [
            "Clinics added evening hours as influenza cases doubled last week.",
            "Nurses administer the seasonal vaccine to hundreds of patients daily.",
            "Waiting rooms overflow wherever the flu hits hardest.",
            "Officials expect the seasonal wave to peak within a month.",
        ],
    },
    {
        "id": "a16", "source_id": "src-wd", "split": "sample1",
        "title": "Farm Life: Smokehouse Season in the Valley",
        "body": [
            "The farmer cures hams with garlic rubs before the first frost.",
            "Modern trials of supposed miracle cures leave cancer patients weighing risky options, his wife notes sadly.",
            "Their smokehouse draws visitors from three counties each autumn.",
            "Most of the barn now stores crops for the winter market.",
        ],
    },
    {
        "id": "a17", "source_id": "src-gn", "split": "sample1",
        "title": "City Report Flags Aging Stoves in Old Housing",
        "body": [
            "A city report says smoking stoves in old housing causes constant complaints each winter.",
            "A separate study tracked lung cancer screening uptake in rural clinics.",
            "Inspectors recorded soot on windows across four blocks.",
            "Officials promise housing upgrades before next winter.",
        ],
    },
    {
        "id": "a18", "source_id": "src-gn", "split": "sample2",
        "title": "Cleaning Habits That Outlasted the Lockdown",
        "body": [
            "Diluted bleach cures the stubborn mold stains that haunt bathroom tiles.",
            "Officials once urged drinking more water during the coronavirus lockdown, and an infection specialist praised simple hand washing.",
            "Supermarkets still sell disinfectant by the crate.",
            "Habit, it seems, outlives any emergency.",
        ],
    },
    {
        "id": "a19", "source_id": "src-wd", "split": "sample1",
        "title": "Small Rituals for Deeper Sleep",
        "body": [
            "Earlier bedtimes did more for our testers than any gadget.",
            "A dark, cool room beat white noise machines handily.",
            "Screens off by nine remains the hardest habit to keep.",
            "Gentle stretching helped the restless fall asleep faster.",
        ],
    },
    {
        "id": "a20", "source_id": "src-nf", "split": "sample1",
        "title": "Community Garden Opens Its Gates Downtown",
        "body": [
            "Volunteers planted tomato beds along the south fence this weekend.",
            "Organizers hope the harvest will stock two neighborhood pantries.",
            "A shaded bench corner invites visitors to rest among the roses.",
            "Workshops on composting begin next month.",
        ],
    },
]

# gold pair labels: (article, claim, presence, stance, expected per-method notes)
GOLD_PAIRS = [
    ("a01", "c01", "present", "supporting"),
    ("a02", "c08", "present", "supporting"),
    ("a03", "c03", "present", "contradicting"),
    ("a04", "c09", "present", "supporting"),
    ("a23", "c04", "present", "neutral"),
    ("a05", "c02", "present", "supporting"),
    ("a06", "c06", "present", "supporting"),
    ("a07", "c02", "present", "contradicting"),
    ("a22", "c09", "present", "supporting"),
    ("a08", "c04", "suggestive", "supporting"),
    ("a09", "c07", "suggestive", "supporting"),
    ("a10", "c05", "suggestive", "supporting"),
    ("a11", "c10", "present", "supporting"),
    ("a12", "c10", "not_present", None),
    ("a13", "c04", "not_present", None),
    ("a15", "c06", "not_present", None),
    ("a14", "c02", "not_present", None),
    ("a16", "c01", "not_present", None),
    ("a17", "c08", "not_present", None),
    ("a18", "c03", "not_present", None),
    ("a01", "c07", "not_present", None),
    ("a02", "c03", "not_present", None),
    ("a06", "c10", "not_present", None),
    ("a13", "c08", "not_present", None),
    ("a17", "c06", "not_present", None),
    ("a04", "c05", "not_present", None),
]

RSS_FEED = """<?xml version="1.0" encoding="UTF-8"?>
<rss version="2.0">
  <channel>
    <title>Herbal Health News</title>
    <link>https://herbalhealth.example/</link>
    <description>Daily natural health updates</description>
    <item>
      <title>Ginger Shots Sweep the Farmers Market</title>
      <link>https://herbalhealth.example/posts/ginger-shots?utm_source=rss&amp;utm_medium=feed</link>
      <description>Vendors report long lines for fiery ginger shots every weekend morning. Regulars claim the drink wards off winter sniffles.</description>
      <pubDate>Mon, 06 Sep 2021 10:00:00 GMT</pubDate>
    </item>
    <item>
      <title>Elderberry Syrup Returns to Shelves</title>
      <link>https://HerbalHealth.example/posts/elderberry</link>
      <description>After a shortage, the popular syrup is back. Fans stockpile bottles before the cold season.</description>
      <pubDate>Tue, 07 Sep 2021 09:30:00 GMT</pubDate>
    </item>
    <item>
      <title>Five Teas for Restless Nights</title>
      <link>https://herbalhealth.example/posts/teas-for-sleep</link>
      <description>Chamomile leads our reader poll again. Valerian root earns honorable mention despite the smell.</description>
      <pubDate>not a real date</pubDate>
    </item>
  </channel>
</rss>
"""

CLAIM_FEED = [
    {"id": "c90", "statement": "Ginger shots ward off winter sniffles.", "rating": "mixture", "fact_checker_id": "src-fc1", "fact_check_url": "https://factcheckalpha.example/ginger"},
    {"id": "c91", "statement": "Elderberry syrup shortens colds.", "rating": "unknown", "fact_checker_id": "src-fc2", "fact_check_url": "https://metaverify.example/elderberry"},
]

MONITORS = {
    "providers": [
        {"id": "rss-herbal", "type": "rss", "source_id": "src-hh"},
        {"id": "claims-alpha", "type": "claims", "fact_checker_id": "src-fc1"},
    ],
    "monitors": [
        {
            "id": "mon-articles",
            "provider": "rss-herbal",
            "interval_seconds": 3600,
            "params": {"feeds": ["fixtures/feeds/health_news.xml"]},
            "chain": [],
        },
        {
            "id": "mon-claims",
            "provider": "claims-alpha",
            "interval_seconds": 7200,
            "params": {"feeds": ["fixtures/feeds/factcheck_claims.jsonl"]},
            "chain": [],
        },
    ],
}

FNC_BODIES = [
    ("101", "The senator denied the quotes attributed to her. Her office called the viral post a fabrication. Reporters could not find the speech anywhere."),
    ("102", "A new analysis supports the earlier findings. Researchers replicated the effect in two labs. The original team welcomed the confirmation."),
    ("103", "Officials discussed the incident without confirming details. The report considers several explanations. A final ruling is expected next month."),
    ("104", "Local fans celebrated the team's return. The parade drew record crowds downtown."),
]

FNC_STANCES = [
    ("Senator made the viral remarks", "101", "disagree"),
    ("Earlier findings hold up", "102", "agree"),
    ("Cause of the incident remains open", "103", "discuss"),
    ("Team returns to parade", "104", "unrelated"),
    ("Viral quotes were fabricated", "101", "agree"),
    ("Replication failed", "102", "disagree"),
]


def _jsonl(path: Path, rows: list[dict]) -> None:
    path.write_text(
        "\n".join(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in rows) + "\n",
        encoding="utf-8",
    )


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    (FIXTURES / "feeds").mkdir(exist_ok=True)

    write_vectors(FIXTURES / "vectors.txt")
    (FIXTURES / "medical_terms.txt").write_text(
        "\n".join(MEDICAL_TERMS) + "\n", encoding="utf-8"
    )

    _jsonl(FIXTURES / "sources.jsonl", SOURCES)
    _jsonl(FIXTURES / "claims.jsonl", CLAIMS)

    articles = []
    for a in ARTICLES:
        articles.append(
            {
                "id": a["id"],
                "source_id": a["source_id"],
                "url": f"https://{a['source_id']}.example/{a['id']}",
                "title": a["title"],
                "body": " ".join(a["body"]),
                "published_at": None,
                "authors": [],
                "split": a["split"],
            }
        )
    _jsonl(FIXTURES / "articles.jsonl", articles)

    labels = []
    for article_id, claim_id, presence, stance in GOLD_PAIRS:
        labels.append(
            {
                "article_id": article_id,
                "claim_id": claim_id,
                "presence": presence,
                "stance": stance,
                "origin": "manual",
                "presence_score": None,
                "pair_veracity": None,
            }
        )
    _jsonl(FIXTURES / "pair_labels.jsonl", labels)

    stance_rows = [
        {"claim_id": c, "article_id": a, "stance": s}
        for a, c, p, s in GOLD_PAIRS
        if s is not None
    ]
    _jsonl(FIXTURES / "stance_train.jsonl", stance_rows)

    (FIXTURES / "feeds" / "health_news.xml").write_text(RSS_FEED, encoding="utf-8")
    _jsonl(FIXTURES / "feeds" / "factcheck_claims.jsonl", CLAIM_FEED)
    (FIXTURES / "monitors.json").write_text(
        json.dumps(MONITORS, indent=2) + "\n", encoding="utf-8"
    )

    with open(FIXTURES / "fnc_bodies.csv", "w", encoding="utf-8") as fh:
        fh.write("Body ID,articleBody\n")
        for body_id, text in FNC_BODIES:
            fh.write(f'{body_id},"{text}"\n')
    with open(FIXTURES / "fnc_stances.csv", "w", encoding="utf-8") as fh:
        fh.write("Headline,Body ID,Stance\n")
        for headline, body_id, stance in FNC_STANCES:
            fh.write(f'"{headline}",{body_id},{stance}\n')

    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
