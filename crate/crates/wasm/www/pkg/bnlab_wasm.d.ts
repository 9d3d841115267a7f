/* tslint:disable */
/* eslint-disable */

/**
 * ω(A_out⁰(x, t)) along the +x ray for a unit charge at rest in the
 * state `gupta`, `coulomb`, `lw` (velocity c) or `vacuum`. Away from the
 * origin a non-zero value at spacelike points marks a state outside the
 * vacuum's charge class.
 *
 * Rows: `[r, region, ω(A_out⁰), −Coulomb potential]`.
 */
export function charge_class_profile(state: string, cx: number, cy: number, cz: number, sigma: number, t: number, r_max: number, n: number): Float64Array;

/**
 * Both sides of the characteristic-function identity on radii in
 * (0, r_max]. Rows: `[r, quadrature, closed form]`.
 */
export function chi_identity(t: number, r_max: number, n: number): Float64Array;

/**
 * Shift field per unit charge along the +x ray from a charge at the
 * origin. `field` is one of `interior`, `exterior`, `coulomb`, `lw`; the
 * velocity is the outgoing one for interior/exterior and c for `lw`.
 *
 * Rows: `[r, region, A⁰, A¹, A², A³]` with region 0 interior, 1
 * spacelike, 2 shell.
 */
export function field_profile(field: string, sigma: number, vx: number, vy: number, vz: number, t: number, r_max: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly charge_class_profile: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly chi_identity: (a: number, b: number, c: number) => [number, number, number, number];
    readonly field_profile: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
