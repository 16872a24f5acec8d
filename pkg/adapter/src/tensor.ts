/**
 * Minimal rank-3 float64 tensor in C (row-major) order.
 *
 * Prediction exchange files and window batches are all shaped
 * (windows, variates, steps), so one fixed-rank container is enough.
 */
export class Tensor3 {
  readonly data: Float64Array;

  constructor(
    readonly shape: readonly [number, number, number],
    data?: Float64Array
  ) {
    const [a, b, c] = shape;
    if (
      !Number.isInteger(a) ||
      !Number.isInteger(b) ||
      !Number.isInteger(c) ||
      a < 0 ||
      b < 0 ||
      c < 0
    ) {
      throw new Error(`tensor shape must be non-negative integers, got ${shape}`);
    }
    const size = a * b * c;
    if (data === undefined) {
      this.data = new Float64Array(size);
    } else {
      if (data.length !== size) {
        throw new Error(
          `tensor data holds ${data.length} values, shape ${shape} needs ${size}`
        );
      }
      this.data = data;
    }
  }

  get size(): number {
    const [a, b, c] = this.shape;
    return a * b * c;
  }

  index(i: number, j: number, k: number): number {
    const [a, b, c] = this.shape;
    if (i < 0 || i >= a || j < 0 || j >= b || k < 0 || k >= c) {
      throw new Error(`index (${i}, ${j}, ${k}) outside shape ${this.shape}`);
    }
    return (i * b + j) * c + k;
  }

  get(i: number, j: number, k: number): number {
    return this.data[this.index(i, j, k)];
  }

  set(i: number, j: number, k: number, value: number): void {
    this.data[this.index(i, j, k)] = value;
  }

  /** Deep-copy into nested arrays, mostly for assertions and debugging. */
  toNested(): number[][][] {
    const [a, b, c] = this.shape;
    const out: number[][][] = [];
    for (let i = 0; i < a; i++) {
      const rows: number[][] = [];
      for (let j = 0; j < b; j++) {
        const row: number[] = [];
        for (let k = 0; k < c; k++) {
          row.push(this.get(i, j, k));
        }
        rows.push(row);
      }
      out.push(rows);
    }
    return out;
  }

  static fromNested(values: number[][][]): Tensor3 {
    const a = values.length;
    const b = a > 0 ? values[0].length : 0;
    const c = b > 0 ? values[0][0].length : 0;
    const tensor = new Tensor3([a, b, c]);
    for (let i = 0; i < a; i++) {
      if (values[i].length !== b) {
        throw new Error(`ragged tensor: row ${i} holds ${values[i].length} of ${b}`);
      }
      for (let j = 0; j < b; j++) {
        if (values[i][j].length !== c) {
          throw new Error(
            `ragged tensor: cell (${i}, ${j}) holds ${values[i][j].length} of ${c}`
          );
        }
        for (let k = 0; k < c; k++) {
          tensor.set(i, j, k, values[i][j][k]);
        }
      }
    }
    return tensor;
  }
}
