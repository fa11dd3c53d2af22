#!/usr/bin/env python3
# Copyright 2026 The Forge Authors
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

"""Regenerates the bundled mini knowledge base under data/tables/.

Sources: hanzipy (cjk-decomp single-level splits, Jun Da frequency ranks),
pypinyin (readings), opencc (simplified -> traditional), strokes (stroke
counts). The emoji lexicon and a handful of visual pairs are curated below.

  pip install hanzipy pypinyin opencc-python-reimplemented strokes
  python3 scripts/gen_mini_tables.py data/tables
"""

import logging
import os
import sys

logging.disable(logging.CRITICAL)

from hanzipy.decomposer import HanziDecomposer  # noqa: E402
from hanzipy.dictionary import HanziDictionary  # noqa: E402
from pypinyin import Style, pinyin  # noqa: E402
import opencc  # noqa: E402
from strokes import strokes  # noqa: E402

TOP_N = 520

# Characters that must be present regardless of frequency: example words,
# lexicon terms and the golden-case surfaces.
REQUIRED = (
    "精神病树汉池也比此乐瘫脑人杀普信楠谱言喃婊子孽畜打大生日歪瓜裂枣外挂列早"
    "奸韩箭舔狗妈的女权猴犭侯止支歧视妓海上计算任何值得可怜小红书一堆都不如快现形"
    "这是么他常真些没有傻逼垃圾废物死滚蛋猪屎贱蠢笨丑渣婆娘鬼骗子土老帽穷装疯癫"
    "男信牛马鸡鸭羊蛇鼠火水心钱炸枪刀吃哭笑怒草星花菜"
)

# Split overrides where the reading-level split differs from cjk-decomp.
DECOMP_OVERRIDES = {"树": "木又寸"}

RADICAL_READINGS = {
    "氵": "shui3", "扌": "shou3", "忄": "xin1", "亻": "ren2", "礻": "shi4",
    "疒": "ne4", "犭": "quan3", "讠": "yan2", "纟": "si1", "钅": "jin1",
    "饣": "shi2", "艹": "cao3", "宀": "mian2", "辶": "chuo4", "阝": "fu4",
    "冫": "bing1", "刂": "dao1", "衤": "yi1", "彳": "chi4", "攵": "pu1",
    "灬": "huo3", "罒": "wang3", "钅": "jin1", "覀": "ya4", "丬": "qiang2",
}

# Hand-picked look-alike pairs for characters without a radical to swap.
VISUAL_CURATED = {
    "比": "此", "己": "已", "已": "己", "未": "末", "末": "未", "土": "士",
    "士": "土", "人": "入", "入": "人", "大": "太 犬", "太": "大", "日": "曰",
    "天": "夫", "夫": "天", "王": "主 玉", "千": "干", "干": "千", "于": "干",
    "问": "间", "间": "问", "今": "令", "令": "今",
}

EMOJI = [
    ("杀", "💀 🔪", "picto"), ("死", "💀", "picto"), ("妈", "🐴", "homo"),
    ("马", "🐴", "picto"), ("舔狗", "👅🐶", "picto"), ("狗", "🐶", "picto"),
    ("女权", "👩👊", "picto"), ("女", "👩", "picto"), ("傻逼", "🏜️🍺", "homo"),
    ("傻", "🏜️", "homo"), ("牛逼", "🐮🍺", "homo"), ("牛", "🐮", "picto"),
    ("猪", "🐷", "picto"), ("鸡", "🐔", "picto"), ("鸭", "🦆", "picto"),
    ("羊", "🐑", "picto"), ("蛇", "🐍", "picto"), ("鼠", "🐭", "picto"),
    ("猴", "🐒", "picto"), ("鬼", "👻", "picto"), ("火", "🔥", "picto"),
    ("水", "💧", "picto"), ("心", "❤️", "picto"), ("钱", "💰", "picto"),
    ("炸", "💣", "picto"), ("枪", "🔫", "picto"), ("刀", "🔪", "picto"),
    ("屎", "💩", "picto"), ("蛋", "🥚", "picto"), ("吃", "🍽️", "picto"),
    ("哭", "😭", "picto"), ("笑", "😂", "picto"), ("怒", "😡", "picto"),
    ("草", "🌿", "homo"), ("日", "☀️", "picto"), ("星", "⭐", "picto"),
    ("花", "🌸", "picto"), ("菜", "🥬", "picto"), ("瓜", "🍉", "picto"),
    ("垃圾", "🗑️", "picto"), ("滚", "🎳", "homo"), ("蠢", "🐛", "picto"),
    ("骗子", "🤥", "picto"), ("丑", "🤡", "picto"), ("病", "🤒", "picto"),
]


# Components that act as a swappable semantic radical in a two-part split.
RADICALS = set("氵扌忄亻礻疒犭讠纟钅饣艹宀辶阝冫刂衤彳攵灬木口女土日月火王石目"
               "禾米车马贝足言金虫鸟鱼竹糸山巾心手水犬示衣食门雨页")


def is_cjk(ch):
    cp = ord(ch)
    return (0x4E00 <= cp <= 0x9FFF or 0x3400 <= cp <= 0x4DBF
            or 0x2E80 <= cp <= 0x2FDF or 0xF900 <= cp <= 0xFAFF
            or 0x20000 <= cp <= 0x2FFFF)


def readings(ch):
    if ch in RADICAL_READINGS:
        return [RADICAL_READINGS[ch]]
    out = []
    for r in pinyin(ch, style=Style.TONE3, heteronym=True,
                    neutral_tone_with_five=True)[0]:
        if not r or not r[-1].isdigit() or not r[:-1].isalpha():
            continue
        if not r[:-1].isascii():
            continue
        tone = "0" if r[-1] == "5" else r[-1]
        syl = r[:-1].lower() + tone
        if syl not in out:
            out.append(syl)
    return out


def main(out_dir):
    dec = HanziDecomposer()
    dic = HanziDictionary()

    def freq(ch):
        try:
            return int(dic.get_character_frequency(ch)["number"])
        except Exception:  # not in the frequency list
            return None

    ranked = []
    for cp in range(0x4E00, 0xA000):
        f = freq(chr(cp))
        if f is not None:
            ranked.append((f, chr(cp)))
    ranked.sort()
    core = [c for _, c in ranked[:TOP_N]]
    for c in REQUIRED:
        if c not in core:
            core.append(c)
    to_simp = opencc.OpenCC("t2s")

    def traditional_only(ch):
        return to_simp.convert(ch) != ch

    core = [c for c in core if readings(c) and not traditional_only(c)]

    def split_of(ch):
        if ch in DECOMP_OVERRIDES:
            return list(DECOMP_OVERRIDES[ch])
        try:
            once = dec.decompose(ch)["once"]
        except Exception:
            return []
        if len(once) < 2 or len(once) > 4:
            return []
        if any(len(c) != 1 or not is_cjk(c) or c == ch or not readings(c)
               or traditional_only(c) for c in once):
            return []
        return once

    chars = list(core)
    present = set(chars)
    splits = {}
    for c in core:
        s = split_of(c)
        splits[c] = s
        for comp in s:
            if comp not in present:
                present.add(comp)
                chars.append(comp)
    for c in chars:
        if c not in splits:
            s = split_of(c)
            splits[c] = s if all(x in present for x in s) else []

    def rank_key(c):
        f = freq(c)
        return (0, f, c) if f is not None else (1, 0, c)

    chars.sort(key=rank_key)
    rank = {c: i + 1 for i, c in enumerate(chars)}

    # Reverse splits must be unambiguous; the more frequent char keeps its split.
    seen = {}
    for c in chars:
        key = "".join(splits[c])
        if not key:
            continue
        if key in seen:
            splits[c] = []
        else:
            seen[key] = c

    conv = opencc.OpenCC("s2t")
    trad = {}
    used_trad = {}
    for c in chars:
        t = conv.convert(c)
        if len(t) != 1 or not is_cjk(t):
            t = c
        if t != c:
            if t in used_trad or t in present:
                t = c
            else:
                used_trad[t] = c
        trad[c] = t

    def stroke(c):
        try:
            n = strokes(c)
            return n if n and n > 0 else None
        except Exception:
            return None

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "chars.tsv"), "w", encoding="utf-8") as f:
        f.write("# char\tdecomposition\tpinyin\ttraditional\tfrequency_rank"
                "\tstroke_count\n")
        for c in chars:
            s = stroke(c)
            f.write("\t".join([c, "".join(splits[c]), ";".join(readings(c)),
                               trad[c], str(rank[c]),
                               str(s) if s else ""]) + "\n")

    # Visual neighbors: curated pairs first, then radical removal/addition and
    # radical swaps derived from the two-part splits.
    core_set = set(core)
    by_rest = {}
    for c in chars:
        s = splits[c]
        if len(s) == 2 and s[0] in RADICALS and c in core_set:
            by_rest.setdefault(s[1], []).append(c)
    neighbors = {c: [] for c in chars}

    def add(a, b):
        if a != b and b in present and b not in neighbors[a]:
            neighbors[a].append(b)

    for c, ns in VISUAL_CURATED.items():
        if c in present:
            for n in ns.split():
                add(c, n)
    for c in chars:
        s = splits[c]
        if len(s) != 2 or s[0] not in RADICALS:
            continue
        rest = s[1]
        auto = []
        if rest in present:
            auto.append(rest)
        auto += [d for d in by_rest.get(rest, []) if d != c]
        sc = stroke(c) or 0
        auto.sort(key=lambda d: (abs((stroke(d) or 0) - sc), ord(d)))
        for d in auto:
            add(c, d)
        if rest in present:
            add(rest, c)
    with open(os.path.join(out_dir, "visual.tsv"), "w", encoding="utf-8") as f:
        f.write("# char\tneighbors (space separated, pre-ranked)\n")
        for c in chars:
            if neighbors[c]:
                f.write(c + "\t" + " ".join(neighbors[c]) + "\n")

    with open(os.path.join(out_dir, "emoji.tsv"), "w", encoding="utf-8") as f:
        f.write("# unit\temoji (space separated, ranked)\tprovenance\n")
        for unit, emo, prov in EMOJI:
            if all(ch in present for ch in unit):
                f.write(f"{unit}\t{emo}\t{prov}\n")

    print(f"{len(chars)} chars, "
          f"{sum(1 for c in chars if splits[c])} with splits, "
          f"{sum(1 for c in chars if neighbors[c])} with visual neighbors")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/tables")
