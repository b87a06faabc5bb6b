/* tslint:disable */
/* eslint-disable */

/**
 * One step applied to a one-line permutation; `keep` holds 1-based offsets.
 */
export function applyStep(perm: string, start: number, width: number, keep: Uint32Array): string;

export function randomPermutation(n: number, seed: number): string;

/**
 * Scenario from the identity to `perm` as JSON frames.
 */
export function scenarioTrace(perm: string, algo: string, width: number): string;

export function vpAnalysis(perm: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly applyStep: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly randomPermutation: (a: number, b: number) => [number, number];
    readonly scenarioTrace: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly vpAnalysis: (a: number, b: number) => [number, number, number, number];
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
