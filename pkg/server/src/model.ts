// Scoring model behind the wire protocol. The reference implementation is a
// deterministic word-list model: any sentiment + offensiveness classifier
// pair producing the same output shapes can stand in for it.

export interface ScoreVector {
  sentiment: [number, number, number]; // [negative, neutral, positive]
  offense: [number, number]; // [non-offensive, offensive]
}

export interface ScorerModel {
  readonly id: string;
  scoreBatch(texts: string[]): Promise<ScoreVector[]>;
}

// Inference batches are capped; larger requests are chunked internally.
export const MAX_BATCH = 64;

// word -> [valence in [-1, 1], offensiveness in [0, 1]]
const WORD_SCORES: Record<string, [number, number]> = {
  abuse: [-0.8, 0.7],
  attack: [-0.7, 0.6],
  beautiful: [0.8, 0.0],
  bombing: [-0.9, 0.7],
  brutal: [-0.8, 0.7],
  calm: [0.5, 0.0],
  cheerful: [0.7, 0.0],
  corpse: [-0.7, 0.5],
  cruel: [-0.8, 0.7],
  dead: [-0.7, 0.4],
  death: [-0.8, 0.4],
  despise: [-0.7, 0.6],
  died: [-0.8, 0.4],
  dying: [-0.8, 0.4],
  evil: [-0.8, 0.6],
  excellent: [0.9, 0.0],
  filth: [-0.6, 0.7],
  fired: [-0.5, 0.3],
  friendly: [0.7, 0.0],
  garbage: [-0.5, 0.5],
  gentle: [0.6, 0.0],
  good: [0.6, 0.0],
  great: [0.7, 0.0],
  happy: [0.8, 0.0],
  hate: [-0.8, 0.7],
  hideous: [-0.7, 0.5],
  horrible: [-0.8, 0.5],
  hostile: [-0.6, 0.5],
  idiot: [-0.7, 0.8],
  jobless: [-0.5, 0.2],
  killed: [-0.9, 0.7],
  killing: [-0.9, 0.7],
  kind: [0.7, 0.0],
  lovely: [0.8, 0.0],
  lies: [-0.6, 0.5],
  massacre: [-1.0, 0.8],
  moron: [-0.7, 0.8],
  murder: [-1.0, 0.8],
  nasty: [-0.6, 0.6],
  nice: [0.6, 0.0],
  peace: [0.7, 0.0],
  peaceful: [0.7, 0.0],
  pleasant: [0.7, 0.0],
  poison: [-0.7, 0.5],
  poverty: [-0.6, 0.2],
  prison: [-0.6, 0.3],
  scum: [-0.8, 0.9],
  slaughter: [-1.0, 0.8],
  stupid: [-0.6, 0.6],
  terrible: [-0.8, 0.5],
  torture: [-0.9, 0.8],
  trash: [-0.5, 0.5],
  ugly: [-0.6, 0.5],
  vile: [-0.8, 0.7],
  violence: [-0.8, 0.6],
  war: [-0.7, 0.5],
  warm: [0.6, 0.0],
  wonderful: [0.9, 0.0],
  worthless: [-0.7, 0.6],
  wounded: [-0.7, 0.4],
};

const TOKEN_RE = /[\p{L}\p{N}]+(?:['’-][\p{L}\p{N}]+)*/gu;

function scoreOne(text: string): ScoreVector {
  const tokens = text.toLowerCase().match(TOKEN_RE) ?? [];
  const matched = tokens
    .map((t) => WORD_SCORES[t])
    .filter((entry): entry is [number, number] => entry !== undefined);
  if (matched.length === 0) {
    return { sentiment: [0, 1, 0], offense: [1, 0] };
  }
  const valence = matched.reduce((acc, [v]) => acc + v, 0) / matched.length;
  const offense = matched.reduce((acc, [, o]) => acc + o, 0) / matched.length;
  return {
    sentiment: [Math.max(0, -valence), 1 - Math.abs(valence), Math.max(0, valence)],
    offense: [1 - offense, offense],
  };
}

export function createLexiconModel(): ScorerModel {
  // Single model instance; inference calls are serialized through a queue.
  let queue: Promise<unknown> = Promise.resolve();
  return {
    id: "lexicon-v1",
    scoreBatch(texts: string[]): Promise<ScoreVector[]> {
      const run = queue.then(() => {
        const results: ScoreVector[] = [];
        for (let i = 0; i < texts.length; i += MAX_BATCH) {
          for (const text of texts.slice(i, i + MAX_BATCH)) {
            results.push(scoreOne(text));
          }
        }
        return results;
      });
      queue = run.catch(() => undefined);
      return run;
    },
  };
}
