import assert from "node:assert/strict";
import { test } from "node:test";

import {
  RequestTokens,
  chooseMetric,
  clampCursor,
  initialState,
  navigate,
  selectRuns,
  setTotalSegments,
  turnPage,
} from "../src/state.js";

test("navigation preserves run selection and metric choice", () => {
  let state = initialState();
  state = selectRuns(state, ["run-1", "run-2"]);
  state = chooseMetric(state, "comet");
  state = navigate(state, "perturbations");
  assert.deepEqual(state.selectedRuns, ["run-1", "run-2"]);
  assert.equal(state.metric, "comet");
  state = navigate(state, "translation");
  assert.deepEqual(state.selectedRuns, ["run-1", "run-2"]);
  assert.equal(state.metric, "comet");
});

test("segment cursor stays within run bounds", () => {
  let state = setTotalSegments(initialState(), 5);
  state = clampCursor(state, 99);
  assert.equal(state.cursor, 4);
  state = clampCursor(state, -3);
  assert.equal(state.cursor, 0);
});

test("shrinking the run clamps an existing cursor", () => {
  let state = setTotalSegments(initialState(), 100);
  state = clampCursor(state, 80);
  state = setTotalSegments(state, 10);
  assert.equal(state.cursor, 9);
});

test("selecting runs resets the cursor", () => {
  let state = setTotalSegments(initialState(), 20);
  state = clampCursor(state, 12);
  state = selectRuns(state, ["other"]);
  assert.equal(state.cursor, 0);
});

test("page turning clamps to the data", () => {
  let state = setTotalSegments(initialState(), 120); // pages: 0, 50, 100
  state = turnPage(state, 1);
  assert.equal(state.pageOffset, 50);
  state = turnPage(state, 1);
  assert.equal(state.pageOffset, 100);
  state = turnPage(state, 1);
  assert.equal(state.pageOffset, 100); // last page
  state = turnPage(state, -5);
  assert.equal(state.pageOffset, 0);
});

test("shrinking the run clamps the page offset", () => {
  let state = setTotalSegments(initialState(), 500);
  state = turnPage(state, 9);
  assert.equal(state.pageOffset, 450);
  state = setTotalSegments(state, 60);
  assert.equal(state.pageOffset, 50);
});

test("request tokens drop stale responses", () => {
  const tokens = new RequestTokens();
  const first = tokens.issue("segments");
  const second = tokens.issue("segments");
  assert.equal(tokens.isCurrent("segments", first), false);
  assert.equal(tokens.isCurrent("segments", second), true);
  assert.equal(tokens.isCurrent("other", 1), false);
});
