import type { AgreementMatrix, ResultsPayload } from "../src/types.js";

/** Hand-built payloads mirroring what the service emits, for offline tests. */

function flatDensity(size: number): number[] {
  // Binomial(size - 1, 1/2) shifted onto ranks 1..size; exact dyadic values.
  const row: number[] = [];
  let coefficient = 1;
  for (let k = 0; k < size; k++) {
    row.push(coefficient / 2 ** (size - 1));
    coefficient = (coefficient * (size - 1 - k)) / (k + 1);
  }
  return row;
}

function emptyAgreement(items: string[]): AgreementMatrix {
  const blank = items.map(() => items.map(() => null));
  return { items, map: blank, eap: blank };
}

export function flatBcjPayload(size = 6): ResultsPayload {
  const ids = Array.from({ length: size }, (_, index) => `item-${index + 1}`);
  const density = flatDensity(size);
  return {
    session_id: "fixture-flat",
    mode: "BCJ",
    items: ids.map((id) => ({ id, title: id.toUpperCase(), content_ref: "" })),
    budget: { max_comparisons: 50, used: 0, remaining: 50 },
    ranking: ids.map((id, index) => ({
      rank: index + 1,
      item_id: id,
      title: id.toUpperCase(),
      expected_rank: (size + 1) / 2,
      density: [...density],
    })),
    tie_breaks: [
      { expected_rank: (size + 1) / 2, tied: [...ids], resolved: [...ids] },
    ],
    agreement: { holistic: emptyAgreement(ids) },
    criteria: [{ id: "holistic", label: "Holistic" }],
    decision_pdfs: {
      holistic: [
        {
          pair: [ids[0]!, ids[1]!],
          alpha: 1,
          beta: 1,
          grid: [0, 0.25, 0.5, 0.75, 1],
          pdf: [1, 1, 1, 1, 1],
          mode: 0.5,
        },
      ],
    },
  };
}

export function mbcjRadarPayload(): ResultsPayload {
  const ids = ["a", "b", "c", "d", "e", "f", "g", "h"];
  const criteria = [
    { id: "c1", label: "Structure" },
    { id: "c2", label: "Evidence" },
    { id: "c3", label: "Clarity" },
  ];
  const density = flatDensity(ids.length);
  const perCriterion: Record<string, number> = { c1: 5.75, c2: 5.25, c3: 5.25 };
  return {
    session_id: "fixture-radar",
    mode: "MBCJ",
    items: ids.map((id) => ({ id, title: id, content_ref: "" })),
    budget: { max_comparisons: 40, used: 12, remaining: 28 },
    ranking: ids.map((id, index) => ({
      rank: index + 1,
      item_id: id,
      title: id,
      expected_rank: 4.5,
      density: [...density],
      criterion_densities: Object.fromEntries(
        criteria.map((criterion) => [criterion.id, [...density]]),
      ),
      criterion_expected_ranks: { ...perCriterion },
    })),
    tie_breaks: [],
    agreement: {
      c1: {
        items: ids.slice(0, 3),
        map: [
          [null, 0.67, 0.5],
          [0.33, null, 0.49],
          [0.5, 0.51, null],
        ],
        eap: [
          [null, 0.6, 0.4],
          [0.4, null, 0.3],
          [0.6, 0.7, null],
        ],
      },
    },
    criteria,
    weights: [1 / 3, 1 / 3, 1 / 3],
    radar: Object.fromEntries(
      ids.map((id) => [id, { per_criterion: { ...perCriterion }, combined: 4.5 }]),
    ),
    decision_pdfs: {
      c1: [
        {
          pair: ["a", "b"],
          alpha: 3,
          beta: 1,
          grid: [0, 0.5, 1],
          pdf: [0, 0.75, 3],
          mode: 1,
        },
      ],
    },
  };
}
