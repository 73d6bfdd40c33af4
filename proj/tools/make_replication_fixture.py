#!/usr/bin/env python3
"""Regenerates the synthetic replication fixture under data/.

The fixture mimics three recorded sweeps of the most-popular chart. The
sampled video ids and the category frequencies follow the original sample;
every count is synthetic. Output is deterministic.
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
OUT = DATA / "replication"

CATEGORIES = [  # label, platform category id, frequency
    ("Entertainment", "24", 24), ("Tech", "28", 15), ("Sports", "17", 11),
    ("Comedy", "23", 9), ("Education", "27", 9), ("News", "25", 8),
    ("Film", "1", 7), ("Animals", "15", 4), ("Music", "10", 4),
    ("People", "22", 4), ("Nonprofit", "29", 3), ("Howto", "26", 1),
    ("Travel", "19", 1),
]
EXTRA_IDS = [f"noComment{i:02d}" for i in range(1, 7)]
SWEEP_TIMES = ["2013-12-09T10:00:00Z", "2013-12-12T10:00:00Z", "2013-12-16T10:00:00Z"]
PAGE_SIZE = 25


def read_ids():
    ids = []
    for line in (DATA / "sampled_video_ids.txt").read_text().splitlines():
        if line and not line.startswith("#"):
            ids.append(line)
    assert len(ids) == 100 and len(set(ids)) == 100
    return ids


def lognormal(rng, median, sigma, lo, hi):
    return min(hi, max(lo, median * math.exp(rng.gauss(0.0, sigma))))


def main():
    rng = random.Random(20131217)
    ids = read_ids()

    labels = [cid for _, cid, n in CATEGORIES for _ in range(n)]
    rng.shuffle(labels)

    videos = {}
    used_views = set()
    for vid, cat in zip(ids, labels):
        views = int(lognormal(rng, 900_000, 1.3, 7_105, 36_285_216))
        while views in used_views:
            views += 1
        used_views.add(views)
        cpki = lognormal(rng, 0.9, 0.9, 0.195, 109.354)
        vpki = lognormal(rng, 6.5, 0.7, 1.285, 63.723)
        disp = lognormal(rng, 0.06, 0.9, 0.0075, 0.8827)
        votes = max(75, round(vpki * views / 1000))
        dislikes = round(disp * votes)
        videos[vid] = dict(views=views, comments=max(9, round(cpki * views / 1000)),
                           likes=votes - dislikes, dislikes=dislikes, category=cat)
    # Pin the published extremes of views onto two sampled videos.
    by_views = sorted(ids, key=lambda v: videos[v]["views"])
    videos[by_views[0]]["views"] = 7_105
    videos[by_views[-1]]["views"] = 36_285_216

    # Popular videos with commenting disabled: eligible by views, excluded
    # by the comment filter.
    for vid in EXTRA_IDS:
        views = int(lognormal(rng, 8_000_000, 0.5, 2_000_000, 30_000_000))
        votes = round(lognormal(rng, 6.5, 0.5, 2, 40) * views / 1000)
        dislikes = round(0.05 * votes)
        videos[vid] = dict(views=views, comments=None, likes=votes - dislikes,
                           dislikes=dislikes, category=rng.choice(CATEGORIES)[1])

    order = ids + EXTRA_IDS
    rng.shuffle(order)
    assert len(order) == 106
    sweeps = [order[0:50], order[30:80], order[56:106]]
    last_seen = {}
    for k, members in enumerate(sweeps):
        for vid in members:
            last_seen[vid] = k

    OUT.mkdir(parents=True, exist_ok=True)
    for old in OUT.glob("sweep*_page*.json"):
        old.unlink()
    for k, members in enumerate(sweeps):
        items = []
        for vid in members:
            v = videos[vid]
            # Earlier sightings carry smaller counts; the last sighting holds
            # the final statistics.
            scale = 0.8 ** (last_seen[vid] - k)
            stats = {"viewCount": str(round(v["views"] * scale)),
                     "likeCount": str(round(v["likes"] * scale)),
                     "dislikeCount": str(round(v["dislikes"] * scale)),
                     "favoriteCount": "0"}
            if v["comments"] is not None:
                stats["commentCount"] = str(round(v["comments"] * scale))
            items.append({"kind": "youtube#video", "id": vid,
                          "snippet": {"categoryId": v["category"]},
                          "statistics": stats})
        pages = [items[i:i + PAGE_SIZE] for i in range(0, len(items), PAGE_SIZE)]
        for j, page in enumerate(pages, start=1):
            doc = {"kind": "youtube#videoListResponse",
                   "fetchedAt": SWEEP_TIMES[k],
                   "pageInfo": {"totalResults": len(items), "resultsPerPage": PAGE_SIZE}}
            if j < len(pages):
                doc["nextPageToken"] = f"s{k + 1}p{j + 1}"
            doc["items"] = page
            path = OUT / f"sweep{k + 1}_page{j}.json"
            path.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
