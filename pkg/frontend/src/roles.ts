import type { RelationView } from './types.js';

/** Pre-filled values for the three role inputs: the event-type prefix the
 * labels must carry, ready for the curator to complete. */
export function prefillRoles(eventType: string): [string, string, string] {
  return [eventType, eventType, eventType];
}

/**
 * Client-side mirror of the server's role-label rules: exactly three labels,
 * pairwise distinct, each prefixed with the event type. A non-empty result
 * means the triple would be refused, so no request should be sent.
 */
export function validateRoles(eventType: string, roles: string[]): string[] {
  const errors: string[] = [];
  if (roles.length !== 3) {
    errors.push('exactly three role labels are required');
    return errors;
  }
  if (new Set(roles).size !== 3) {
    errors.push('role labels must be pairwise distinct');
  }
  for (const role of roles) {
    if (!role.startsWith(eventType)) {
      errors.push(`"${role}" must be prefixed with ${eventType}`);
    } else if (role === eventType) {
      errors.push('a role label needs a suffix after the event-type prefix');
    }
  }
  return errors;
}

/** Existing role triples under the same event type, offered for reuse so a
 * second template can join an existing relation instead of minting a new
 * one by typo. */
export function roleSuggestions(relations: RelationView[], eventType: string): string[][] {
  return relations.filter((r) => r.eventType === eventType).map((r) => [...r.roles]);
}
