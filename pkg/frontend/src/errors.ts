export class BindingError extends Error {
  /** Name of the offending argument, or "cli" for subprocess failures. */
  readonly argument: string;

  constructor(message: string, argument: string) {
    super(`${argument}: ${message}`);
    this.name = "BindingError";
    this.argument = argument;
  }
}
