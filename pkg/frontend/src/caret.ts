// Mapping a reported 1-based line:column error position onto the editor.

export function caretOffset(text: string, line: number, column: number): number {
  const lines = text.split("\n");
  if (line < 1) return 0;
  if (line > lines.length) return text.length;
  let offset = 0;
  for (let i = 0; i < line - 1; i++) offset += lines[i].length + 1;
  const col = Math.min(Math.max(column, 1), lines[line - 1].length + 1);
  return offset + col - 1;
}

// A caret line rendered under the offending source line, e.g. for
// position 1:7 over "MATCH (d:Drug" produce "      ^".
export function caretLine(text: string, line: number, column: number): string {
  const lines = text.split("\n");
  const source = lines[Math.min(Math.max(line, 1), lines.length) - 1] ?? "";
  const col = Math.min(Math.max(column, 1), source.length + 1);
  return " ".repeat(col - 1) + "^";
}
