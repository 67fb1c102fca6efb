"""Writes the formula-fidelity corpus: dataset, predictions, oracle table and
the pre-segmented structure used by the brute-force reference in the tests.

Run from this directory: python3 make_fixture.py
The outputs are committed; rerunning with the same seed reproduces them.
"""
import json
import random

rng = random.Random(20240607)
nli = {}
claims = {}


def put(premise, hypothesis, label):
    if hypothesis in premise or not premise:
        return
    nli.setdefault((premise, hypothesis), label)


def label_of(premise, hypothesis):
    if hypothesis in premise:
        return "entailment"
    return nli.get((premise, hypothesis), "neutral")


def claims_of(sentence):
    return claims.get(sentence, [sentence])


def render(sentences, chinese):
    parts = [s["text"] + "".join(f"[{c}]" for c in s["cites"]) for s in sentences]
    return ("" if chinese else " ").join(parts)


def plain(sentences, chinese):
    return ("" if chinese else " ").join(s["text"] for s in sentences)


def make_sentence(sample, tag, k, chinese):
    if chinese:
        text = f"样本{sample}{tag}第{k}句陈述了事实。"
    else:
        text = f"Sample {sample} {tag} sentence {k} states a fact."
    n_claims = rng.choice([1, 1, 2, 2, 3])
    if n_claims == 1:
        return {"text": text, "claims": [text]}
    cl = []
    for c in range(n_claims):
        cl.append(f"样本{sample}{tag}第{k}句的子断言{c}。" if chinese else f"Claim {c} of sample {sample} {tag} sentence {k}.")
    # Occasionally a paraphrase of an earlier claim (mutual entailment) or a
    # one-directional near duplicate.
    r = rng.random()
    if r < 0.3:
        para = cl[0][:-1] + ("（复述）。" if chinese else " restated.")
        cl.append(para)
        put(cl[0], para, "entailment")
        put(para, cl[0], "entailment")
    elif r < 0.45:
        weaker = cl[0][:-1] + ("（弱化）。" if chinese else " weakened.")
        cl.append(weaker)
        put(cl[0], weaker, "entailment")
    claims[text] = cl
    return {"text": text, "claims": cl}


def doc_relations(docs, sentence):
    for d in docs:
        r = rng.random()
        if r < 0.22:
            put(d["text"], sentence["text"], "entailment")
        elif r < 0.32:
            put(d["text"], sentence["text"], "contradiction")
        for c in sentence["claims"]:
            if rng.random() < 0.3:
                put(d["text"], c, "entailment")


def oracle_set(docs, sentence):
    out = []
    for d in docs:
        lab = label_of(d["text"], sentence["text"])
        if lab == "entailment":
            out.append(d["id"])
        elif lab == "neutral" and any(label_of(d["text"], c) == "entailment" for c in claims_of(sentence["text"])):
            out.append(d["id"])
    return out


def concat_relations(docs, sentence, ids):
    texts = [d["text"] for d in docs if d["id"] in ids]
    if len(texts) < 2:
        return
    premise = "\n".join(texts)
    if any(label_of(t, sentence["text"]) == "entailment" for t in texts) or rng.random() < 0.15:
        put(premise, sentence["text"], "entailment")
    for c in sentence["claims"]:
        if any(label_of(t, c) == "entailment" for t in texts) or rng.random() < 0.25:
            put(premise, c, "entailment")


def mask_relations(sentences):
    for i, s in enumerate(sentences):
        if s["cites"]:
            continue
        rest = [t["text"] for j, t in enumerate(sentences) if j != i and t["cites"]]
        if rest and (s.get("concluding") or rng.random() < 0.4):
            put("\n".join(rest), s["text"], "entailment")


dataset, predictions, structure = [], [], []
N_SAMPLES = 12
for i in range(1, N_SAMPLES + 1):
    chinese = i % 2 == 0
    n_docs = rng.choice([3, 4, 5, 5, 6])
    docs = []
    for j in range(1, n_docs + 1):
        text = f"主题{i}的第{j}篇资料记录了若干事实。" if chinese else f"Topic {i} source {j} reports several facts."
        docs.append({"id": j, "text": text})

    ref = [make_sentence(i, "参考" if chinese else "reference", k, chinese) for k in range(rng.randint(3, 5))]
    for k, s in enumerate(ref):
        if k == len(ref) - 1 and rng.random() < 0.5:
            s["cites"] = []
            s["concluding"] = True
        else:
            s["cites"] = sorted(rng.sample(range(1, n_docs + 1), rng.choice([1, 1, 2])))

    sys_ = [make_sentence(i, "系统" if chinese else "system", k, chinese) for k in range(rng.randint(3, 6))]
    for k, s in enumerate(sys_):
        r = rng.random()
        if r < 0.3:
            s["cites"] = []
        else:
            s["cites"] = sorted(rng.sample(range(1, n_docs + 1), rng.choice([1, 1, 2, 3]) if n_docs >= 3 else 1))
        if rng.random() < 0.06:
            s["cites"] = sorted(set(s["cites"]) | {n_docs + 3})
    if i == 3:
        # trailing uncited sentence: no later citations to fall back on
        sys_[-1]["cites"] = []
    if i == 5:
        sys_[-1]["cites"] = []
        sys_[-1]["concluding"] = True

    for s in ref + sys_:
        doc_relations(docs, s)
    for s in ref + sys_:
        valid = [c for c in s["cites"] if c <= n_docs]
        concat_relations(docs, s, valid)
        concat_relations(docs, s, oracle_set(docs, s))
    mask_relations(sys_)
    mask_relations(ref)

    ref_plain, sys_plain = plain(ref, chinese), plain(sys_, chinese)
    for s in sys_:
        for c in s["claims"]:
            if rng.random() < 0.5:
                put(ref_plain, c, "entailment")
    for s in ref:
        for c in s["claims"]:
            if rng.random() < 0.5:
                put(sys_plain, c, "entailment")
    for s in ref + sys_:
        for c in s["claims"]:
            if rng.random() < 0.85:
                put(s["text"], c, "entailment")
        if len(s["claims"]) > 1 and rng.random() < 0.75:
            put("\n".join(s["claims"]), s["text"], "entailment")

    sid = f"fx{i:02d}"
    dataset.append({
        "id": sid,
        "query": f"问题{i}" if chinese else f"Question {i}?",
        "documents": [{"title": f"doc {d['id']}", "content": d["text"]} for d in docs],
        "summary": render(ref, chinese),
        "human_citations": [s["cites"] for s in ref],
    })
    predictions.append({"id": sid, "summary": render(sys_, chinese)})
    structure.append({
        "id": sid,
        "documents": docs,
        "reference": [{"text": s["text"], "cites": s["cites"]} for s in ref],
        "system": [{"text": s["text"], "cites": s["cites"]} for s in sys_],
        "reference_plain": ref_plain,
        "system_plain": sys_plain,
    })

# One sample whose system output is empty: no sentences, null attribution.
dataset.append({
    "id": "fx13",
    "query": "Question 13?",
    "documents": [{"content": "Topic 13 source 1 reports several facts."}],
    "summary": "Sample 13 reference sentence 0 states a fact.[1]",
    "human_citations": [[1]],
})
predictions.append({"id": "fx13", "summary": ""})
structure.append({
    "id": "fx13",
    "documents": [{"id": 1, "text": "Topic 13 source 1 reports several facts."}],
    "reference": [{"text": "Sample 13 reference sentence 0 states a fact.", "cites": [1]}],
    "system": [],
    "reference_plain": "Sample 13 reference sentence 0 states a fact.",
    "system_plain": "",
})

with open("dataset.jsonl", "w", encoding="utf-8") as f:
    for r in dataset:
        f.write(json.dumps(r, ensure_ascii=False) + "\n")
with open("predictions.jsonl", "w", encoding="utf-8") as f:
    for r in predictions:
        f.write(json.dumps(r, ensure_ascii=False) + "\n")
with open("oracle.json", "w", encoding="utf-8") as f:
    json.dump({
        "nli_mode": "lenient",
        "split_mode": "lenient",
        "nli": [{"premise": p, "hypothesis": h, "label": l} for (p, h), l in sorted(nli.items())],
        "claims": [{"sentence": s, "claims": c} for s, c in sorted(claims.items())],
    }, f, ensure_ascii=False, indent=1)
with open("structure.json", "w", encoding="utf-8") as f:
    json.dump(structure, f, ensure_ascii=False, indent=1)

n_sent = sum(len(s["reference"]) + len(s["system"]) for s in structure)
print(f"{len(structure)} samples, {n_sent} sentences, {len(nli)} nli entries, {len(claims)} claim splits")
