import random

from pam.declare import ConstraintProfile, oracle_evaluate_template
from pam.miner import TensorSlice


def reference_mine_window(window, profile: ConstraintProfile, alphabet_size: int,
                          window_index: int = 0) -> TensorSlice:
    """Brute-force miner: loop every channel and argument assignment through
    the direct-semantics oracle under the same occurrence conditions."""
    cells = set()
    present = {}
    for e in window:
        present[e] = present.get(e, 0) + 1
    for channel, template in enumerate(profile):
        if template.arity == 1:
            for activity in range(alphabet_size):
                if oracle_evaluate_template(template, activity, None, window):
                    cells.add((activity, activity, channel))
        else:
            needs_two = template.id in ("alternate_response", "alternate_precedence")
            for a in present:
                for b in present:
                    if a == b:
                        continue
                    if needs_two and present[b] < 2:
                        continue
                    if oracle_evaluate_template(template, a, b, window):
                        cells.add((a, b, channel))
    return TensorSlice(window_index=window_index, cells=frozenset(cells))


def random_window(rng: random.Random, max_len=10, alphabet_size=5):
    length = rng.randint(1, max_len)
    return tuple(rng.randrange(alphabet_size) for _ in range(length))


# --- brute-force metric oracles (threshold sweeps and pair counting) ---

def brute_average_precision(scores, labels):
    total_pos = sum(labels)
    ap = 0.0
    prev_recall = 0.0
    for t in sorted(set(scores), reverse=True):
        kept = [l for s, l in zip(scores, labels) if s >= t]
        tp = sum(kept)
        ap += (tp / total_pos - prev_recall) * (tp / len(kept))
        prev_recall = tp / total_pos
    return ap


def brute_roc_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    credit = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return credit / (len(pos) * len(neg))


def brute_best_f1(scores, labels):
    total_pos = sum(labels)
    best = 0.0
    for t in sorted(set(scores), reverse=True):
        kept = [l for s, l in zip(scores, labels) if s >= t]
        tp = sum(kept)
        p, r = tp / len(kept), tp / total_pos
        if p + r > 0:
            best = max(best, 2 * p * r / (p + r))
    return best


def random_scored_set(rng):
    n = rng.randint(2, 50)
    if rng.random() < 0.5:
        scores = [rng.choice([0.0, 0.2, 0.4, 0.6, 0.8, 1.0]) for _ in range(n)]
    else:
        scores = [rng.random() for _ in range(n)]
    labels = [rng.random() < 0.4 for _ in range(n)]
    if not any(labels):
        labels[rng.randrange(n)] = True
    if all(labels):
        labels[rng.randrange(n)] = False
    return scores, [1 if l else 0 for l in labels]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                rows.append((name, "PASS" if outcome == "passed" else "FAIL"))
    for report in terminalreporter.stats.get("skipped", []):
        if "test_acceptance" in report.nodeid:
            rows.append((report.nodeid.split("::")[-1], "SKIPPED"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(set(rows)):
            terminalreporter.write_line(f"{name}: {outcome}")
