"""Versioned prompt bank: router, captioning, 23 instruction agents, rewriter.

24 agents total: one instruction agent per task plus the rewriter used by the
reasoning workflows. Text-aware templates carry an ``[OCR Text Blocks]``
placeholder filled at render time.
"""

from __future__ import annotations

from dataclasses import dataclass

from .records import OcrBlock
from .taxonomy import TASKS, TaskKind

PROMPT_BANK_VERSION = "1.0"

OCR_BLOCKS_PLACEHOLDER = "[OCR Text Blocks]"

SYSTEM_INSTRUCTION_AGENT = (
    "You are an AI assistant responsible for generating precise and actionable "
    "image editing instructions."
)

SYSTEM_ROUTER = (
    "You are an AI assistant responsible for dispatching images to appropriate "
    "image editing tasks."
)

CAPTION_PROMPT = """\
Please provide an English caption describing the image.
The description should include the main object(s), the scene or environment, and the overall style.
If there are multiple objects, specify their spatial relationships.
The description should not be overly complex - just a few simple sentences are enough.
Output only the image description, Do not add extra explanation or output.
"""

DETAILED_CAPTION_PROMPT = """\
Please provide a detailed description for the provided images from 7 aspects: \
Foreground, Midground, Background, Style, Lighting and Atmosphere, Composition \
and Relationships, Visual Focus and Perspective.
For each aspect, list the distinct elements using numbered points (1., 2., 3., ...).
"""

VARIANT_CAPTION_PROMPT = """\
Below lists the elements of a image from different aspects, please modify the element: {element}.
{detailed_caption}
Output only one line representing the variant element without any other explanation.
"""

ROUTER_PROMPT = """\
Task
Given an image and several candidate editing tasks, please check the N/A condition one by one, and then output the inappropriate tasks.

Guidelines
The candidate tasks and N/A condition are as follows:
- Style Transfer: N/A if the image already has an abstract or highly stylized appearance.
- Tone Adjustment: N/A if the image lacks recoverable tonal information (e.g., extremely dark, overexposed).
- Viewpoint Transformation: N/A if the image lacks discernible 3D structure (e.g., a solid color image, or a purely abstract pattern).
- Background Replacement: N/A if the image has no distinct foreground objects or the entire image is a homogeneous background.
- Object Addition: N/A if the image lacks space or a plausible context to realistically insert a new object (such as close-ups or extremely crowded scenes).
- Object Removal: N/A if there is no clearly discernible object to be removed.
- Object Replacement: N/A if there is no clearly discernible object to be replaced.
- Action Editing: N/A if there is no animate subject.
- Part Extraction: N/A if the image contains no complex objects with clearly distinguishable sub-parts (e.g., a simple geometric shape or a blurry scene).
- Color Change: N/A if there is no specific object or region with a stable, identifiable color (e.g., heavily motion-blurred or color-uniform scenes).
- Material Change: N/A if the image contains no objects with discernible surface textures or materials (e.g., a photo of a purely digital drawing).
- Visual Beautification: N/A if there is no clearly visible human portrait.
- Count Change: N/A if there is no countable subject (e.g., an abstract painting, a photograph of water).
- Size Change: N/A if there is no distinct, isolated object whose scale can be altered without breaking scene integrity.
- Movie Poster Text Editing: N/A if there is no movie poster or no text clearly associated with a poster in the image.
- GUI Interface Text Editing: N/A if there is no GUI interface or no text clearly visible on a GUI interface in the image.
- Object Surface Text Editing: N/A if there is no text printed on the surface of a non-building object in the image.
- Building Surface Text Editing: N/A if there is no text on an architectural structure (e.g., sign, billboard, wall) in the image.
- Perceptual Reasoning: N/A if the image lacks any real-world semantic objects, spatial, or causal relationships to infer (e.g., purely abstract, pattern-based).
- Symbolic Reasoning: N/A if there is no abstract, symbolic, or synthetic visual element.
- Social Reasoning: N/A if there is no social interaction, cultural context, or human-centric scene (e.g., a photo of a purely natural landscape).
- Scientific Reasoning: N/A if the image does not depict any physical, biological, or other scientific processes that could support a scientifically valid edit (e.g., abstract images, sketches with no real-world semantics).
- Compositional Editing: N/A if none of the required atomic sub-tasks are applicable.

Output Format
For each task, output one line. For each line, output 'yes' if applicable for the task, 'no' otherwise with a brief explanation.
"""

# Authored for this pipeline: the rewriter distills a reasoning-rich user
# query into the short command actually sent to the edit model.
REWRITER_PROMPT = """\
You are an AI assistant responsible for rewriting complex image editing queries into concise, executable editing commands.

Task
Given an image and a complex, reasoning-rich editing query, distill it into a short, direct command that describes only the concrete visual change to make. Resolve any reasoning, knowledge, or inference in the query yourself and state its visual outcome explicitly.

Query: {query}

Guidelines
- Keep only the concrete visual change; drop explanations, reasoning chains, and hypotheticals.
- Name the affected objects or regions explicitly.
- The command must be directly executable by an image editing model with no world knowledge.

Examples
- Query: Draw what the steel looks like after being left in a damp place for one year.
  Output: Cover the steel surface with reddish-brown rust.
- Query: Show the scene after the ice cube has fully melted into a small puddle of water.
  Output: Replace the ice cube with a small puddle of water.
- Query: Draw the living room at Christmas.
  Output: Add a decorated Christmas tree, string lights, and wrapped gifts to the living room.

Output format
Provide exactly one sentence describing the edit command. Do not include any other text.
"""

_OUTPUT_FORMAT = """\
Output format
Provide exactly one sentence describing the edit instruction. Do not include any other text.
"""

_STANDARD_HEADER = """\
Task
Given an image and an editing task with its definition, your goal is to create a clear, specific, and unambiguous editing instruction for the image.

Editing task: {task_name}
Definition: {definition}
"""

_TEXT_HEADER = """\
Task
Given an image, an editing task with its definition and available OCR texts, your goal is to select ONE most suitable text element to modify and then create a clear, specific, and unambiguous editing instruction for the image.

Editing task: {task_name}
Definition: {definition}

Available OCR Texts
[OCR Text Blocks]
"""

# Per-task prompt body: (template task name, definition line, guidelines, examples).
_AGENT_SPECS: dict[str, tuple[str, str, str, str]] = {
    "style_transfer": (
        "Style Transfer",
        "Applying an artistic or stylistic transformation to the image.",
        """\
- Describe the target style in your instruction.
- Avoid abstract instructions.
- Ensure diverse and creative instructions, either
  - focus on the image content, and how it could be changed,
  - or focus on the image characteristics, choose a reasonable style.""",
        """\
- Image Content: A man in a suit standing in the auditorium and speaking.
  Output: Convert the image into a pencil sketch effect.
- Image Content: A cowboy riding a horse through the jungle.
  Output: Add vintage film grain and faded effects.
- Image Content: An abandoned automobile manufacturing factory.
  Output: Switch the image style to neon-punk.""",
    ),
    "tone_adjustment": (
        "Tone Adjustment",
        "Changing the overall mood or atmosphere, e.g., weather, color, time period, or visual effect, etc.",
        """\
- Describe the target mood or atmosphere in your instruction.
- Avoid abstract instructions like "sepia-toned", "vintage", etc.
- Ensure diverse and creative instructions, either
  - focus on the image content, and how it could be changed,
  - or focus on the image characteristics, choose a reasonable target mood or atmosphere.""",
        """\
- Image Content: A red double-decker bus parked by the roadside under a sunny sky.
  Output: Change the weather to foggy.
- Image Content: A black-and-white image shows a group of people climbing the Great Wall.
  Output: Restore and colorize the image.
- Image Content: A cozy living room with a sofa and a cat.
  Output: Change the time to prehistoric era.
- Image Content: A cashier standing in front of the wine cabinet.
  Output: Add a background blur filter.""",
    ),
    "viewpoint_transformation": (
        "Viewpoint Transformation",
        "Modifies the camera viewpoint or perspective geometry to present the scene from a new spatial angle.",
        """\
- Clearly specify the desired new viewpoint or camera angle in your instruction.
- Avoid vague directions such as "change the view", use explicit directions instead (e.g., "top-down", "bird's-eye view").
- Ensure instructions are physically reasonable given the scene content.
- Ensure diverse and creative instructions.""",
        """\
- Image Content: A woman sitting at a desk using a laptop.
  Output: Shift the camera to a top-down overhead view.
- Image Content: A dog running on the beach.
  Output: Change the view to the dog's front.
- Image Content: A car parked on a city street.
  Output: Re-render the scene from a rear three-quarter left perspective.""",
    ),
    "background_replacement": (
        "Background Replacement",
        "Change elements in the background or change the whole background to another environment.",
        """\
- Describe the new background environment or scene in your instruction.
- Do NOT change the whole background if it dominates the image, focus on partial background areas instead (e.g., sky, wall, window view).
- Ensure instructions are physically reasonable given the scene content.
- Ensure diverse and creative instructions.""",
        """\
- Image Content: A beach house under a clear blue sky.
  Output: Replace the sky in the background with a sunset scene.
- Image Content: A family playing in the backyard.
  Output: Change the background to a snowy environment.
- Image Content: A car parked on a scenic mountain road at dawn.
  Output: Change the winding road and mountainous landscape in the background to a cityscape with skyscrapers.""",
    ),
    "object_addition": (
        "Object Addition",
        "Add new element to the image.",
        """\
- Describe the new object with its attributes (e.g., color, shape, etc.) and position in your instruction.
- Instructions must be specific, avoid terms like "some" or "a few" without proper quantification.""",
        """\
- Image Content: A comfortable green sofa in the modern living room.
  Output: Add a potted green plant to the left of the sofa.
- Image Content: A bride in a white wedding dress.
  Output: Add a diamond necklace for her.
- Image Content: A woman playing tennis on a court, actively swinging her tennis racket.
  Output: Draw a flying baseball coming towards the player.""",
    ),
    "object_removal": (
        "Object Removal",
        "Remove one or more existing, identifiable elements from the image.",
        """\
- Only issue removal instructions. Do NOT include any replacement or addition actions.
- The subject to be removed must be clearly identifiable, avoid vague or overly detailed references.
- When multiple similar subjects are present, either:
  - Specify exactly which one using distinguishing features (e.g., "the cat near the window", "the man in a blue jacket"), or
  - Remove all of them (e.g., "remove all the chairs").""",
        """\
- Image Content: A store with the logo "711" by the roadside.
  Output: Remove the store logo.
- Image Content: An elderly man with white hair surrounded by many security guards.
  Output: Erase the elderly man in the center of the image.
- Image Content: Sliced apples and a knife on a wooden board.
  Output: Remove all the apple slices.""",
    ),
    "object_replacement": (
        "Object Replacement",
        "Replace an existing element with another.",
        """\
- The subject to be replaced must be clearly identifiable, avoid vague or overly detailed references.
- Describe the new object with its attributes (e.g., color, shape, size, etc.) in your instruction.
- When multiple similar subjects are present, either:
  - Specify exactly which one using distinguishing features (e.g., "the cat near the window", "the man in a blue jacket"), or
  - Replace all of them (e.g., "replace all the apples with bananas").""",
        """\
- Image Content: A woman holding a book in the office.
  Output: Replace the book with a bouquet of red roses.
- Image Content: A beach house under a clear blue sky.
  Output: Replace the beach house with a large camping tent.
- Image Content: A modern house in a suburban neighborhood.
  Output: Turn the modern house into a medieval stone castle.""",
    ),
    "action_editing": (
        "Action Editing",
        "Modifies the pose, action, or behavioral state of animate subjects (e.g., humans or animals).",
        """\
- Describe the specific pose, action or behavioral state of the subjects in your instruction.
- The subject to modify should be clearly identifiable.
- When multiple similar subjects are present, specify exactly which one using distinguishing features (e.g., "the cat near the window", "the man in a blue jacket").""",
        """\
- Image Content: A man and a woman standing close together, facing each other affectionately.
  Output: Make the man kiss.
- Image Content: A woman sitting on the sofa while reading the textbook.
  Output: Adjust the woman's pose so she is crossing her legs while reading.
- Image Content: A fashion model looking straight ahead.
  Output: Change the woman's posture so she is standing up and looking to the left.""",
    ),
    "part_extraction": (
        "Part Extraction",
        "Extract specific parts or sub-regions from a complex scene and present them isolated on a clean white background.",
        """\
- Describe the subject to be extracted in your instruction.
- The subject to be extracted must be clearly identifiable, and avoid vague or overly detailed references.
- Ensure the extraction preserves the shape, boundaries, and visual integrity of the selected region.""",
        """\
- Image Content: A man holding a camera.
  Output: Extract the camera on a white background.
- Image Content: A fashion model wearing a navy blue T-shirt and jeans.
  Output: Extract the navy blue T-shirt worn by the person.
- Image Content: A desk with various stationery items, including a laptop, pencils, and notebooks.
  Output: Extract the blue notebook.""",
    ),
    "color_change": (
        "Color Change",
        "Change the color of existing objects.",
        """\
- Describe the subject to be modified and the new color in your instruction.
- The subject to be modified must be clearly identifiable, and avoid vague or overly detailed references.
- When multiple similar subjects are present, either:
  - Specify exactly which one using distinguishing features (e.g., "the cat near the window", "the man in a blue jacket"), or
  - Modify all of them (e.g., "Change all the red apples to green").""",
        """\
- Image Content: A brown bear in a snowy environment.
  Output: Change the color of brown bear to black.
- Image Content: A woman in a red dress.
  Output: Change the color of the woman's red dress to emerald green.
- Image Content: A black jeep parked on a road.
  Output: Turn the black jeep into lime.""",
    ),
    "material_change": (
        "Material Change",
        "Change the material or texture of existing objects.",
        """\
- Describe the subject to be modified and the new material or texture in your instruction.
- The subject to be modified must be clearly identifiable, and avoid vague or overly detailed references.
- The new material should differ significantly from the original (e.g., do not replace cotton with linen).
- When multiple similar subjects are present, either:
  - Specify exactly which one using distinguishing features (e.g., "the cat near the window", "the man in a blue jacket"), or
  - Modify all of them (e.g., "Transform all the wooden chairs to marble ones").""",
        """\
- Image Content: A wooden bench on the grassland.
  Output: Replace the wooden bench's material with marble.
- Image Content: A man wearing a gentleman's top hat.
  Output: Change the hat's material to paper.
- Image Content: A kitten playing with a ball of yarn.
  Output: Reshape the kitten using clay.""",
    ),
    "visual_beautification": (
        "Human Beautification",
        "Enhances or stylizes the appearance of human subjects.",
        """\
- Clearly specify the beautification or enhancement in your instruction (e.g., smoothing skin, brightening eyes, refining facial features).
- Avoid unrealistic alterations that distort identity or face geometry.
- Be explicit and actionable rather than abstract (e.g., "soften facial skin texture" instead of "make the person look nicer").
- When multiple similar subjects are present, specify exactly which one using distinguishing features (e.g., "the woman on the sofa", "the man in a blue jacket").""",
        """\
- Image Content: A woman smiling at the camera.
  Output: Brighten her eyes.
- Image Content: A man standing outdoors in harsh sunlight.
  Output: Reduce harsh shadows on his face.
- Image Content: A portrait of a young adult.
  Output: Apply gentle beauty retouching with refined eyebrows.""",
    ),
    "count_change": (
        "Count Change",
        "Adjust the number of existing objects.",
        """\
- Specify which object to be adjusted.
- Avoid vague wording, explicitly state the target number or the direction of change (e.g., "add one more cat", "remove two cups").
- Ensure changes to object count remain consistent with scene context and spatial layout.""",
        """\
- Image Content: A table with one apple.
  Output: Add a second apple next to the original one.
- Image Content: A street scene with multiple bicycles parked.
  Output: Remove two of the bicycles.
- Image Content: A group of three dogs playing in the yard.
  Output: Duplicate the dog on the far right.""",
    ),
    "size_change": (
        "Size Change",
        "Change the scale or relative size of an existing object.",
        """\
- Specify which object's size to be changed.
- Explicitly describe the scaling direction and magnitude when possible (e.g., "increase the size", "shrink by half").
- Keep the transformation realistic and consistent with the scene's perspective and physical context.""",
        """\
- Image Content: A cat sitting beside a small plant.
  Output: Enlarge the plant to make it roughly twice its current height.
- Image Content: A person holding a large coffee mug.
  Output: Reduce the mug size to a normal handheld proportion.
- Image Content: A toy car placed on the floor.
  Output: Increase the toy car's size of a real car.""",
    ),
    "movie_poster_text": (
        "Movie Poster Text Editing",
        "Replace textual content appearing in movie posters.",
        """\
- Describe the original and the new text in your instruction.
- Provide the exact replacement text, do not use placeholders such as "new title".
- Ensure diverse and creative instructions, may involve:
  - updating the movie title or subtitle,
  - replacing actor names or credits,
  - modifying taglines or promotional text.""",
        """\
- Image Content: A movie poster displaying the title "Dark Horizon".
  Output: Replace the title "Dark Horizon" with "Midnight Escape".
- Image Content: A poster showing a tagline at the top.
  Output: Replace the "Journey" with "Reality".
- Image Content: A poster featuring actor names along the bottom edge.
  Output: Replace "Emma" with "Daniel".""",
    ),
    "gui_interface_text": (
        "GUI Interface Text Editing",
        "Replace textual content in application interfaces.",
        """\
- Describe the original and the new text in your instruction.
- Provide the exact replacement text, do not use placeholders such as "new button".
- Specify which textual interface element should be modified (e.g., button label, menu item, tab name, status text).
- Ensure diverse and creative instructions, may involve:
  - renaming buttons, tabs, headers, or labels,
  - updating interface messages or status indicators,
  - modifying menu entries while keeping UI hierarchy consistent.""",
        """\
- Image Content: A settings window with a button labeled "Apply".
  Output: Change the button label from "Apply" to "Save".
- Image Content: A mobile app interface showing a tab named "Activity".
  Output: Rename the "Activity" tab to "History".
- Image Content: A desktop software toolbar with a label reading "Scan".
  Output: Replace "Scan" on the toolbar with "Import".""",
    ),
    "object_surface_text": (
        "Object Surface Text Editing",
        "Replace textual content printed on object surfaces.",
        """\
- Describe the original and the new text in your instruction.
- Provide the exact replacement text, do not use generic placeholders.
- Specify which surface text should be modified (e.g., T-shirt slogan, label on a bottle, text on packaging).
- Ensure diverse and creative instructions, may involve:
  - replacing brand names, slogans, or printed labels,
  - updating text on clothing, containers, or everyday objects.""",
        """\
- Image Content: A person wearing a T-shirt printed with "SUMMER VIBES".
  Output: Replace the text "VIBES" on the T-shirt with "ENERGY".
- Image Content: A cardboard package showing the words "Eco Pack".
  Output: Replace "Eco Pack" with "Green Box".""",
    ),
    "building_surface_text": (
        "Building Surface Text Editing",
        "Replace textual content on architectural structures.",
        """\
- Describe the original and the new text in your instruction.
- Provide the exact replacement text, do not use generic placeholders.
- Specify which architectural text should be modified (e.g., road sign name, store signboard, billboard headline).
- Ensure diverse and creative instructions, may involve:
  - updating street names, directional signs, or informational boards,
  - replacing shop signage or commercial billboard text.""",
        """\
- Image Content: A street sign reading "Pine Ave".
  Output: Replace the street sign text "Ave" with "Street".
- Image Content: A storefront sign labeled "Coffee House".
  Output: Change the signboard text "Coffee House" to "Daily Brew".""",
    ),
    "perceptual_reasoning": (
        "Perceptual Reasoning",
        "Apply logical modifications to natural images based on causal, spatial, or functional relationships, etc.",
        """\
- Describe the functional change applied to the scene.
- Ensure that modifications follow real-world physics and commonsense reasoning, and avoid arbitrary changes.
- Focus on concrete, observable consequences, and avoid abstract or purely hypothetical instructions.
- Instructions may involve:
  - projecting future or past states of an object based on its current condition,
  - describing natural outcomes of interactions between objects,
  - applying physically plausible movements or transformations in space.""",
        """\
- Image Content: An ice cube on a warm table.
  Output: Show the scene after the ice cube has fully melted into a small puddle of water.
- Image Content: A ball positioned at the top of a ramp.
  Output: Depict the ball after it has rolled halfway down the incline.
- Image Content: A man reaching toward a light switch.
  Output: Draw the scene immediately after the light has been switched off.""",
    ),
    "symbolic_reasoning": (
        "Symbolic Reasoning",
        "Apply reasoning-driven edits to abstract, symbolic, or synthetic visual scenes.",
        """\
- Describe the symbolic or rule-based operation to apply.
- Ensure the edit follows the explicit or implicit logic governing the symbolic scene.
- Provide a definite, rule-aligned instruction, and avoid ambiguous or open-ended reasoning.
- Instructions may involve:
  - completing missing elements in structured diagrams,
  - highlighting or marking the correct answer within symbolic puzzles,
  - performing rule-driven transformations in charts, grids, or schematic designs.""",
        """\
- Image Content: A partially filled arithmetic Sudoku.
  Output: Insert the correct value into the empty cell according to the row and column rules.
- Image Content: A word-search grid with one target word present.
  Output: Circle the hidden word in the grid.
- Image Content: A logic puzzle diagram with several shape categories.
  Output: Draw the lines to connect shape types to the corresponding pictures.""",
    ),
    "social_knowledge_reasoning": (
        "Social Knowledge Reasoning",
        "Apply edits guided by cultural norms, social semantics, or commonsense human conventions, etc.",
        """\
- Describe the culturally or socially appropriate modification the image can reflect in your instruction.
- Ensure the edit follows widely recognized human conventions, traditions, or social expectations.
- Instructions may involve:
  - adapting a scene to a specific cultural or seasonal event,
  - modifying clothing, decorations, or objects to match social context,
  - adjusting visual elements to reflect socially conventional roles or settings.""",
        """\
- Image Content: A family sitting together in a living room.
  Output: Draw the living room at Christmas.
- Image Content: A man sitting in the hall with a serious expression.
  Output: Dress the man up like a lawyer.
- Image Content: A dining table prepared for an ordinary meal.
  Output: Draw what the table looks like on Thanksgiving Day.""",
    ),
    "scientific_knowledge_reasoning": (
        "Scientific Knowledge Reasoning",
        "Apply scientifically valid edits constrained by physical, biological, or chemical principles, etc.",
        """\
- Specify the scientific phenomenon or law governing the modification in your instruction (e.g., replacement reaction, fluid dynamics, biological growth, etc.).
- Ensure every edit is scientifically plausible and consistent with real-world behavior.
- Changes must align with established scientific principles, avoid fictional or impossible outcomes.
- Instructions may involve:
  - projecting physical changes under new environmental conditions,
  - depicting chemical or biological processes over time,
  - simulating scientifically accurate transformations of matter or energy.""",
        """\
- Image Content: A metal rod heated at one end.
  Output: Draw the rod after heat conduction uniformly.
- Image Content: A block of ice left outdoors on a warm day.
  Output: Draw the image after one minute.
- Image Content: A piece of steel on the ground.
  Output: Draw what the steel looks like after being left in a damp place for one year.""",
    ),
    "compositional_editing": (
        "Compositional Editing",
        "Complex edits composed of multiple atomic editing instructions.",
        """\
- Provide a single, coherent instruction that combines multiple edits into one clear sentence.
- Ensure each sub-edit is explicitly described (e.g., what to add, what to recolor, what to resize).
- Specify all modified elements concretely, avoid vague or abstract descriptions.
- Instructions may involve combinations of:
  - object addition, removal or replacement,
  - appearance or color adjustments,
  - attribute changes or spatial rearrangement.""",
        """\
- Image Content: A cat sitting on a sofa.
  Output: Add a small blue pillow next to the cat and brighten the sofa's color to a lighter beige tone.
- Image Content: A man riding a bicycle.
  Output: Add a red backpack to the man's shoulders and change the bicycle frame color to matte black.
- Image Content: A table with a coffee cup.
  Output: Remove the coffee cup and change the material of the table to marble.""",
    ),
}


def _build_template(task: TaskKind) -> str:
    name, definition, guidelines, examples = _AGENT_SPECS[task.id]
    header = (_TEXT_HEADER if task.is_text_aware else _STANDARD_HEADER).format(
        task_name=name, definition=definition
    )
    return f"{header}\nGuidelines\n{guidelines}\n\nExamples\n{examples}\n\n{_OUTPUT_FORMAT}"


def render_ocr_blocks(blocks: list[OcrBlock]) -> str:
    lines = []
    for i, block in enumerate(blocks, start=1):
        lines.append(f'{i}. "{block.text}" (confidence {block.confidence:.2f})')
    return "\n".join(lines)


@dataclass(frozen=True)
class PromptBank:
    """One instruction template per task (23) plus the rewriter: 24 agents."""

    version: str = PROMPT_BANK_VERSION

    @property
    def templates(self) -> dict[str, str]:
        return {task.id: _build_template(task) for task in TASKS}

    def instruction_prompt(self, task: TaskKind, ocr_blocks: list[OcrBlock] | None = None) -> str:
        template = _build_template(task)
        if task.is_text_aware:
            rendered = render_ocr_blocks(ocr_blocks or [])
            template = template.replace(OCR_BLOCKS_PLACEHOLDER, rendered)
        return template

    def rewriter_prompt(self, query: str) -> str:
        return REWRITER_PROMPT.format(query=query)

    def router_prompt(self) -> str:
        return ROUTER_PROMPT

    def caption_prompt(self) -> str:
        return CAPTION_PROMPT

    def detailed_caption_prompt(self) -> str:
        return DETAILED_CAPTION_PROMPT

    def variant_caption_prompt(self, element: str, detailed_caption_text: str) -> str:
        return VARIANT_CAPTION_PROMPT.format(element=element, detailed_caption=detailed_caption_text)
