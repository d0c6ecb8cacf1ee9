#!/usr/bin/env python3
"""Generates the bundled 500-record fixture corpus (two platform exports).

Deterministic for a fixed SEED; rerunning rewrites the same bytes. The corpus
mixes six loose themes of road-and-transit chatter with realistic noise:
retweets, non-English posts, exact and near duplicates, irrelevant posts,
out-of-area geotags, and malformed records that the loader must reject.
"""

import json
import random
from pathlib import Path

SEED = 424242
OUT_DIR = Path(__file__).resolve().parents[2] / "tests" / "fixtures"

ROADS = [
    "i-40", "i-75", "i-640", "kingston pike", "broadway", "henley street",
    "alcoa highway", "chapman highway", "gay street", "cumberland avenue",
]

# (zone hint, lat box, lon box) — the first five match the sample zone file.
GEO_BOXES = [
    ("urban", (35.956, 35.974), (-83.929, -83.906)),
    ("commercial", (35.881, 35.919), (-84.169, -84.121)),
    ("highway", (35.936, 35.949), (-84.099, -83.851)),
    ("residential", (35.991, 36.039), (-83.979, -83.921)),
    ("major_road", (35.921, 35.931), (-84.079, -83.951)),
    ("unzoned", (35.860, 35.875), (-83.840, -83.760)),  # in bbox, no zone
]

OUTSIDE_BBOX = [(36.162, -86.781), (35.045, -85.309), (36.548, -82.562)]

# theme -> (negative, neutral, positive) sentence templates. {r}/{r2} are
# road names; every template contains at least one relevance keyword.
THEMES = {
    "congestion": (
        [
            "stuck in a horrible traffic jam on {r} AGAIN, this commute is the worst",
            "bumper to bumper gridlock on {r}, total standstill for 40 minutes :(",
            "the backup at the {r} merge is awful today, traffic barely crawling",
            "hate this commute, {r} is a parking lot and the delay keeps growing",
            "traffic on {r} is terrible!! missed my meeting because of the gridlock",
        ],
        [
            "heavy traffic reported on {r} between exit 380 and exit 383",
            "traffic volume on {r} about normal for a weekday commute",
            "expect delays on {r} near downtown, traffic moving slowly",
        ],
        [
            "traffic on {r} cleared up nicely, smooth commute for once, love it",
            "no jam on {r} this morning, the new signal timing really helps",
        ],
    ),
    "construction": (
        [
            "the construction closure on {r} is a nightmare, detour adds 25 minutes",
            "road crews tore up {r} again, cones everywhere and no lane open, ugh",
            "worst detour ever, {r} repaving has the whole road blocked",
        ],
        [
            "lane closure on {r} for paving, crews on site through friday",
            "construction update: {r} down to one lane near the {r2} ramp",
            "overnight road work scheduled on {r}, detour posted via {r2}",
        ],
        [
            "the fresh asphalt on {r} is great, so glad the construction finished early",
            "huge thanks to the road crew, {r} repaving done ahead of schedule!",
        ],
    ),
    "transit": (
        [
            "bus on route 11 is late again, transit schedule is a joke",
            "missed the express bus because it never showed, terrible service",
            "the bus driver skipped my stop on {r}, so angry right now",
        ],
        [
            "route 22 bus detoured via {r} while crews work on {r2}",
            "transit authority adds weekend service on the {r} corridor",
            "bus fare stays at two dollars under the new transit budget",
        ],
        [
            "love the new express bus on {r}, clean and right on schedule",
            "great bus driver on route 31 today, friendly and on time",
        ],
    ),
    "incidents": (
        [
            "bad accident on {r}, two cars wrecked and traffic blocked both ways",
            "another crash at the {r} exit, ambulance on scene, awful morning",
            "multi car collision has {r} shut down, avoid the whole road",
        ],
        [
            "crash on {r} cleared, tow truck leaving the scene, road reopened",
            "minor accident reported on {r} near mile marker 12",
        ],
        [
            "glad everyone walked away from that wreck on {r}, amazing response time",
        ],
    ),
    "parking": (
        [
            "gas price at the {r} pump jumped again, fueling the commute hurts",
            "downtown parking garage full by 8am, circled the lot forever, hate it",
            "parking meter ate my quarters on {r}, what a ripoff",
        ],
        [
            "new parking garage on {r} opens monday, 400 spots, 2 dollar fee",
            "gas price around town holding near four dollars this week",
        ],
        [
            "scored a free parking spot right off {r}, best morning ever",
        ],
    ),
    "weather": (
        [
            "black ice on {r} made the road a disaster, terrifying drive in",
            "flooded lanes on {r} again, storm drains can't keep up, awful",
            "fog so thick on {r} you can't see the road, please slow down",
        ],
        [
            "salt trucks treating {r} ahead of tonight's snow, roads wet",
            "rain slowing traffic on {r}, visibility fair, plan extra time",
        ],
        [
            "plows did a wonderful job, {r} completely clear after the snow",
        ],
    ),
}

IRRELEVANT = [
    "the bakery on market square has the best sourdough in town",
    "vols pulled off an incredible win last night, what a game",
    "farmers market opens saturday with live music downtown",
    "my cat knocked the plant off the shelf again, send help",
    "new coffee shop latte art is genuinely impressive",
    "library book sale this weekend, everything a dollar",
    "sunset from the bluff was unreal tonight",
    "recipe night: tried smoked brisket tacos, huge success",
]

NON_ENGLISH = [
    ("es", "el tráfico en la highway 40 está imposible esta mañana"),
    ("es", "otro accidente en la road principal, mucho cuidado"),
    ("fr", "les travaux sur la highway rendent le commute impossible"),
    ("de", "der stau auf der interstate ist heute schrecklich"),
]

HOURS_RUSH = [7, 8, 17, 18]
HOURS_ANY = list(range(24))


def pick_time(rng):
    day = rng.randint(1, 31)
    hour = rng.choice(HOURS_RUSH) if rng.random() < 0.4 else rng.choice(HOURS_ANY)
    minute = rng.randint(0, 59)
    second = rng.randint(0, 59)
    return f"2022-03-{day:02d}T{hour:02d}:{minute:02d}:{second:02d}Z"


def to_epoch(rfc3339):
    import datetime as dt
    return int(dt.datetime.fromisoformat(rfc3339.replace("Z", "+00:00")).timestamp())


def pick_point(rng, box):
    (lat_lo, lat_hi), (lon_lo, lon_hi) = box[1], box[2]
    return (round(rng.uniform(lat_lo, lat_hi), 6), round(rng.uniform(lon_lo, lon_hi), 6))


def make_text(rng, theme):
    neg, neu, pos = THEMES[theme]
    roll = rng.random()
    if roll < 0.55:
        tmpl = rng.choice(neg)
    elif roll < 0.86:
        tmpl = rng.choice(neu)
    else:
        tmpl = rng.choice(pos)
    r, r2 = rng.sample(ROADS, 2)
    text = tmpl.format(r=r, r2=r2)
    decor = rng.random()
    if decor < 0.12:
        text += " https://t.co/" + "".join(rng.choices("abcdefghij0123456789", k=8))
    elif decor < 0.20:
        text += " #knoxtraffic"
    elif decor < 0.25:
        text = "@knoxroads " + text
    return text


def main():
    rng = random.Random(SEED)
    themes = list(THEMES)

    tweets = []   # list of dicts (or raw strings for malformed lines)
    next_id = [1000]

    def tid():
        next_id[0] += 1
        return f"tw{next_id[0]}"

    # 250 relevant, clean tweets; ~24% geotagged inside the area.
    for _ in range(250):
        theme = rng.choice(themes)
        post = {
            "id": tid(),
            "platform": "twitter",
            "text": make_text(rng, theme),
            "created_at": pick_time(rng),
        }
        if rng.random() < 0.24:
            lat, lon = pick_point(rng, rng.choice(GEO_BOXES))
            post["lat"], post["lon"] = lat, lon
        tweets.append(post)

    # 25 retweets of earlier tweets (cleaning drops these).
    for _ in range(25):
        src = rng.choice([t for t in tweets if isinstance(t, dict)])
        tweets.append({
            "id": tid(), "platform": "twitter",
            "text": "RT " + src["text"],
            "created_at": pick_time(rng), "is_retweet": True,
        })

    # 12 non-English posts that still match a keyword.
    for _ in range(12):
        lang, text = rng.choice(NON_ENGLISH)
        tweets.append({
            "id": tid(), "platform": "twitter", "text": text,
            "created_at": pick_time(rng), "lang": lang,
        })

    # 8 exact duplicates: same (platform, id) resubmitted.
    for _ in range(8):
        src = rng.choice(tweets[:250])
        dup = dict(src)
        dup["created_at"] = pick_time(rng)
        tweets.append(dup)

    # 10 near-duplicates: same text modulo URL/whitespace, new id.
    for _ in range(10):
        src = rng.choice(tweets[:250])
        tweets.append({
            "id": tid(), "platform": "twitter",
            "text": src["text"].replace(" ", "  ", 1) +
                    " https://bit.ly/" + "".join(rng.choices("qrstuv456", k=6)),
            "created_at": pick_time(rng),
        })

    # 35 irrelevant posts (no keyword), 5 keyword posts geotagged outside the bbox.
    for _ in range(35):
        tweets.append({
            "id": tid(), "platform": "twitter",
            "text": rng.choice(IRRELEVANT), "created_at": pick_time(rng),
        })
    for _ in range(5):
        lat, lon = rng.choice(OUTSIDE_BBOX)
        tweets.append({
            "id": tid(), "platform": "twitter",
            "text": make_text(rng, rng.choice(themes)),
            "created_at": pick_time(rng), "lat": lat, "lon": lon,
        })

    rng.shuffle(tweets)

    # 5 malformed lines at spread positions (345 valid + 5 = 350 lines).
    malformed = [
        '{"id": "twbad1", "platform": "twitter", "text": "truncated record"',
        '{"platform": "twitter", "text": "missing id", "created_at": "2022-03-05T09:00:00Z"}',
        '42',
        '{"id": "twbad2", "platform": "myspace", "text": "traffic", "created_at": "2022-03-06T10:00:00Z"}',
        '{"id": "twbad3", "platform": "twitter", "text": "bool time", "created_at": true}',
    ]
    lines = [json.dumps(t, separators=(",", ":"), sort_keys=False) if isinstance(t, dict) else t
             for t in tweets]
    for offset, bad in zip((17, 83, 171, 242, 310), malformed):
        lines.insert(offset, bad)
    assert len(lines) == 350, len(lines)
    (OUT_DIR / "corpus_tweets.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    # ---- Reddit CSV: 147 valid rows + 3 malformed = 150 ----
    rows = []
    next_rid = [5000]

    def rid():
        next_rid[0] += 1
        return f"rd{next_rid[0]}"

    def row(post):
        return [
            post.get("id", ""), post.get("platform", "reddit"), post.get("text", ""),
            str(post.get("created_at", "")),
            str(post.get("lat", "")), str(post.get("lon", "")),
            "true" if post.get("is_retweet") else "",
            post.get("lang", ""), post.get("parent_id", ""),
        ]

    reddit = []
    for _ in range(105):
        theme = rng.choice(themes)
        post = {
            "id": rid(), "platform": "reddit",
            "text": make_text(rng, theme),
            "created_at": to_epoch(pick_time(rng)),
        }
        if rng.random() < 0.06:
            post["lat"], post["lon"] = pick_point(rng, rng.choice(GEO_BOXES))
        if rng.random() < 0.3:
            post["parent_id"] = f"rd{rng.randint(4000, 4999)}"
        reddit.append(post)
    for _ in range(6):
        lang, text = rng.choice(NON_ENGLISH)
        reddit.append({
            "id": rid(), "platform": "reddit", "text": text,
            "created_at": to_epoch(pick_time(rng)), "lang": lang,
        })
    for _ in range(4):
        src = rng.choice(reddit[:105])
        dup = dict(src)
        dup["created_at"] = to_epoch(pick_time(rng))
        reddit.append(dup)
    for _ in range(6):
        src = rng.choice(reddit[:105])
        reddit.append({
            "id": rid(), "platform": "reddit",
            "text": "  " + src["text"] + " www.example.com/" + "".join(rng.choices("wxyz123", k=5)),
            "created_at": to_epoch(pick_time(rng)),
        })
    for _ in range(26):
        reddit.append({
            "id": rid(), "platform": "reddit",
            "text": rng.choice(IRRELEVANT) + ", honestly",
            "created_at": to_epoch(pick_time(rng)),
        })

    rng.shuffle(reddit)
    rows = [row(p) for p in reddit]
    bad_rows = [
        ["", "reddit", "missing id row", "1646300000", "", "", "", "", ""],
        [rid(), "reddit", "bad timestamp row about traffic", "not-a-time", "", "", "", "", ""],
        [rid(), "reddit", "half a coordinate on the road", "1646310000", "35.96", "", "", "", ""],
    ]
    for offset, bad in zip((11, 70, 133), bad_rows):
        rows.insert(offset, bad)
    assert len(rows) == 150, len(rows)

    def csv_cell(value):
        if any(c in value for c in ',"\r\n'):
            return '"' + value.replace('"', '""') + '"'
        return value

    header = "id,platform,text,created_at,lat,lon,is_retweet,lang,parent_id"
    csv_lines = [header] + [",".join(csv_cell(c) for c in r) for r in rows]
    (OUT_DIR / "corpus_reddit.csv").write_text("\n".join(csv_lines) + "\n", encoding="utf-8")

    print(f"wrote {len(lines)} jsonl lines and {len(csv_lines) - 1} csv rows to {OUT_DIR}")


if __name__ == "__main__":
    main()
