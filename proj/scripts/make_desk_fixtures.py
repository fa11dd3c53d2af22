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

"""Regenerates the synthetic desk fixtures under data/desk/ and data/icl/.

The fixtures exist so the full pipeline can run offline. None of them are
human judgments:

  data/icl/examples.jsonl       10 in-context examples per perturbation type,
                                built from sentences disjoint from the desk
                                corpus.
  data/desk/annotations.tsv     readability scores from two scripted
                                annotators, derived from a hash of each id.
  data/desk/mock_replies.jsonl  scripted model replies for every desk sample
                                plus span-extraction replies.

Usage: scripts/make_desk_fixtures.py --forge build/tools/forge [--seed 42]
"""

import argparse
import csv
import hashlib
import io
import json
import pathlib
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent

# Sentences used only for in-context examples. Every toxic term is in the
# bundled lexicon.
ICL_TOXIC = [
    "你就是个舔狗",
    "这种渣男早该滚蛋",
    "楼上是不是脑瘫",
    "一群废物还好意思说",
    "别理那个疯子",
    "他就是个骗子",
    "你这个贱人",
    "真是个狗东西",
    "看着就丑",
    "蠢到家了",
    "妈的又迟到",
    "穷鬼别来凑热闹",
    "一看就是歪瓜裂枣",
    "这种土老帽也配",
    "离那个神经病远点",
    "你们这些孽畜",
]

ICL_NONTOXIC = [
    "今天的天气很适合散步",
    "这本书的结局出乎意料",
    "我们周末一起去看展吧",
    "新开的面馆味道不错",
    "他每天坚持跑步五公里",
    "这首歌的旋律很好听",
    "会议改到下午三点",
    "孩子们在操场上踢球",
    "这家店的服务很周到",
    "记得带伞出门",
    "她把房间收拾得很干净",
    "火车晚点了十分钟",
    "图书馆周一闭馆",
    "我最近在学做饭",
    "小猫在窗台上睡觉",
    "这座桥有一百年历史",
    "春天的樱花开得很好",
    "周末超市人很多",
    "明天记得交作业",
    "他送了我一本字典",
    "湖边的风景很美",
    "新买的台灯很亮",
    "午饭吃了饺子",
    "地铁站就在路口",
]

TYPE_FLAGS = ["vsim", "split", "trad", "py_init", "py_full", "homo", "shuff",
              "emoji"]
TYPE_NOTES = {
    "vsim": "用形近字替换了",
    "split": "把汉字拆成了部件来写",
    "trad": "把简体字换成了繁体字来写",
    "py_init": "用拼音首字母代替了",
    "py_full": "用完整拼音代替了",
    "homo": "用同音字替换了",
    "shuff": "打乱了字的顺序来写",
    "emoji": "用表情符号代替了",
}
TOXIC_PER_TYPE = 7
NONTOXIC_PER_TYPE = 3


def unit(key, salt):
    """Deterministic value in [0, 1) from a string key."""
    digest = hashlib.sha256(f"{salt}\t{key}".encode()).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def run(cmd):
    subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)


def read_jsonl(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def make_icl(forge, seed, tmp):
    src = tmp / "icl_src.jsonl"
    write_jsonl(src, [{"id": f"icl{i:02d}", "text": t, "label": "toxic"}
                      for i, t in enumerate(ICL_TOXIC)])
    out = tmp / "icl_perturbed.jsonl"
    run([forge, "perturb", "--type", "all", "--seed", str(seed), "--in",
         str(src), "--out", str(out), "--tables", str(ROOT / "data/tables"),
         "--lexicon", str(ROOT / "data/lexicon/toxic_terms.txt")])
    by_type = {flag: [] for flag in TYPE_FLAGS}
    for rec in read_jsonl(out):
        by_type[rec["type"]].append(rec)
    examples = []
    neutral = iter(ICL_NONTOXIC)
    for flag in TYPE_FLAGS:
        recs = by_type[flag]
        if len(recs) < TOXIC_PER_TYPE:
            sys.exit(f"only {len(recs)} {flag} perturbations; add sentences")
        for rec in recs[:TOXIC_PER_TYPE]:
            changed = "".join(e["replacement"] for e in rec["edits"])
            original = "".join(e["source"] for e in rec["edits"])
            examples.append({
                "text": rec["text"],
                "label": 1,
                "analysis": f"“{changed}”{TYPE_NOTES[flag]}“{original}”，"
                            "句子带有侮辱含义，有毒。",
                "type": flag,
            })
        for _ in range(NONTOXIC_PER_TYPE):
            examples.append({
                "text": next(neutral),
                "label": 0,
                "analysis": "句子只是日常陈述，没有侮辱或攻击，无毒。",
                "type": flag,
            })
    write_jsonl(ROOT / "data/icl/examples.jsonl", examples)


def make_annotations(forge, seed, tmp):
    out = tmp / "ds"
    run([forge, "dataset", "build", "--corpus",
         str(ROOT / "data/desk/corpus.jsonl"), "--tables",
         str(ROOT / "data/tables"), "--lexicon",
         str(ROOT / "data/lexicon/toxic_terms.txt"), "--out", str(out),
         "--seed", str(seed)])
    sheet = list(csv.DictReader(
        open(out / "04_annotation.tsv", encoding="utf-8"), delimiter="\t"))
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(["sample_id", "readability", "extraction_ok", "annotator"])
    for row in sheet:
        sid = row["sample_id"]
        # About one sample in ten reads poorly for both annotators.
        poor = unit(sid, "poor") < 0.1
        for annotator in ("desk-fixture-a", "desk-fixture-b"):
            u = unit(sid, annotator)
            score = (1 + int(u * 2)) if poor else (3 + int(u * 3))
            w.writerow([sid, score, 1, annotator])
    (ROOT / "data/desk/annotations.tsv").write_text(buf.getvalue(),
                                                    encoding="utf-8")
    return out


def make_mock(ds):
    # Detection odds per type for the scripted model, so the report has
    # visible structure.
    odds = {None: 0.92, "vsim": 0.7, "split": 0.45, "trad": 0.9,
            "py_init": 0.35, "py_full": 0.6, "homo": 0.55, "shuff": 0.8,
            "emoji": 0.4}
    spans = {r["id"]: r["spans"] for r in read_jsonl(ds / "02_spans.jsonl")}
    base = {r["id"]: r for r in read_jsonl(ds / "01_base.jsonl")}
    rows = [{"sample_id": "*", "reply": "0，没有毒性内容"}]
    for rec in read_jsonl(ds / "03_perturbed.jsonl") + list(base.values()):
        sid = rec["id"]
        u = unit(sid, "mock")
        if rec["label"] == "toxic":
            p = odds[rec.get("type")]
            if u < p:
                # Most detections quote the sentence; the rest quote only the
                # changed characters, which the MR matcher cannot map back.
                changed = "".join(e["replacement"]
                                  for e in rec.get("edits", []))
                entity = rec["text"] if u < 0.75 * p or not changed else changed
                rows.append({"sample_id": sid,
                             "reply": f"1，毒性内容是：{entity}"})
            else:
                rows.append({"sample_id": sid, "reply": "0，没有毒性内容"})
        elif u < 0.20:
            rows.append({"sample_id": sid, "reply": "1，有攻击性"})
        elif u < 0.25:
            rows.append({"sample_id": sid, "reply": "无法判断"})
    for sid, sp in spans.items():
        terms = [s["surface"] for s in sp]
        rows.append({"sample_id": f"{sid}#extract",
                     "reply": json.dumps(terms, ensure_ascii=False)})
    write_jsonl(ROOT / "data/desk/mock_replies.jsonl", rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--forge", required=True)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    with tempfile.TemporaryDirectory() as d:
        tmp = pathlib.Path(d)
        make_icl(args.forge, args.seed, tmp)
        ds = make_annotations(args.forge, args.seed, tmp)
        make_mock(ds)


if __name__ == "__main__":
    main()
